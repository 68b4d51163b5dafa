#include "qet/harness.hpp"

#include "qet/expval.hpp"
#include "qet/gradest.hpp"
#include "qet/hardness.hpp"
#include "qet/norms.hpp"
#include "qet/phaseest.hpp"
#include "qet/qcore.hpp"
#include "qet/qram.hpp"
#include "qet/tomo_mixed.hpp"
#include "qet/tomo_pure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

namespace qet {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}
std::string fmt(uint64_t v) { return std::to_string(v); }
std::string fmt(long v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

// One grid point: parameter name -> chosen value.
using Point = std::map<std::string, std::string>;

double get_d(const Point& p, const std::string& k, double dflt) {
    auto it = p.find(k);
    return it == p.end() ? dflt : std::stod(it->second);
}
long get_l(const Point& p, const std::string& k, long dflt) {
    auto it = p.find(k);
    return it == p.end() ? dflt : std::stol(it->second);
}
std::string get_s(const Point& p, const std::string& k, const std::string& dflt) {
    auto it = p.find(k);
    return it == p.end() ? dflt : it->second;
}

std::vector<Point> expand_grid(const ExperimentConfig& cfg) {
    std::vector<Point> pts{Point{}};
    for (const auto& [key, values] : cfg.grid) {
        require(!values.empty(), "run: empty value list for grid parameter " + key);
        std::vector<Point> next;
        for (const Point& p : pts)
            for (const std::string& v : values) {
                Point q = p;
                q[key] = v;
                next.push_back(std::move(q));
            }
        pts = std::move(next);
    }
    return pts;
}

Ket random_ket(Eigen::Index d, RandomStream& rng) {
    Vec a(d);
    for (Eigen::Index j = 0; j < d; ++j) a(j) = cplx(rng.normal(), rng.normal());
    return Ket(a / a.norm());
}

Mat random_density(Eigen::Index d, int r, RandomStream& rng) {
    Mat g(d, r);
    for (Eigen::Index i = 0; i < d; ++i)
        for (int j = 0; j < r; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
    Mat rho = g * g.adjoint();
    return rho / rho.trace().real();
}

double schatten_err(const Mat& a, const Mat& b, double q) {
    return norm_mat(a - b, q);
}

struct Experiment {
    std::string description;
    std::function<void(const Point&, uint64_t seed, uint64_t& stream,
                       ResultTable&)> run;
    std::vector<std::string> columns;
};

void add_row(ResultTable& t, std::vector<std::string> row) {
    t.rows.push_back(std::move(row));
}

// ------------------------------------------------------------ experiments

const std::map<std::string, Experiment>& registry() {
    static const std::map<std::string, Experiment> reg = [] {
        std::map<std::string, Experiment> r;

        r["grid_labels"] = Experiment{
            "symmetric grid labels x_j = j/2^n - 1/2 + 2^{-n-1}",
            [](const Point& p, uint64_t, uint64_t& stream, ResultTable& t) {
                int n = int(get_l(p, "n", 3));
                for (const GridLabel& g : grid_labels(n))
                    add_row(t, {fmt(n), fmt(g.j), fmt(g.x), fmt(stream)});
                ++stream;
            },
            {"n", "j", "x", "stream_id"}};

        r["pe_concentration"] = Experiment{
            "suppressed-bias PE: Pr[|err| <= k/M] for k = 1, 2, 3",
            [](const Point& p, uint64_t seed, uint64_t& stream, ResultTable& t) {
                long M = get_l(p, "m_reg", get_l(p, "M", 16));
                uint64_t trials = uint64_t(get_l(p, "trials", 1000000));
                RandomStream rng(seed, stream);
                uint64_t c1 = 0, c2 = 0, c3 = 0;
                for (uint64_t i = 0; i < trials; ++i) {
                    double phi = 2.0 * kPi * rng.uniform();
                    double est = suppressed_pe({phi, M, n_infinite}, rng);
                    double e = dist_2pi(est - phi);
                    c1 += (e <= 1.0 / double(M));
                    c2 += (e <= 2.0 / double(M));
                    c3 += (e <= 3.0 / double(M));
                }
                double se = 0.5 / std::sqrt(double(trials));
                add_row(t, {fmt(M), fmt(trials), fmt(double(c1) / double(trials)),
                            fmt(double(c2) / double(trials)),
                            fmt(double(c3) / double(trials)), fmt(se),
                            fmt(stream)});
                ++stream;
            },
            {"M", "trials", "p_le_1_over_M", "p_le_2_over_M", "p_le_3_over_M",
             "stderr", "stream_id"}};

        r["lambda_calibration"] = Experiment{
            "Monte-Carlo lambda(M, m) = E[Re e^{i phi_bar}] at phi = 0",
            [](const Point& p, uint64_t seed, uint64_t& stream, ResultTable& t) {
                long M = get_l(p, "M", 16);
                int m = int(get_l(p, "m", 0));
                uint64_t samples = uint64_t(get_l(p, "samples", 200000));
                RandomStream rng(seed, stream);
                LambdaTable lt = lambda_mc(M, m, samples, rng);
                add_row(t, {fmt(M), fmt(m), fmt(lt.lambda), fmt(lt.std_err),
                            fmt(samples), fmt(lambda_factor(M)), fmt(stream)});
                ++stream;
            },
            {"M", "m", "lambda", "stderr", "samples", "closed_form", "stream_id"}};

        r["alg3_bias"] = Experiment{
            "boosted suppressed PE empirical bias vs 32 pi (m+1) 2^{-n}",
            [](const Point& p, uint64_t seed, uint64_t& stream, ResultTable& t) {
                long M = get_l(p, "M", 64);
                int m = int(get_l(p, "m", 8));
                int n = int(get_l(p, "n", 12));
                uint64_t trials = uint64_t(get_l(p, "trials", 1000000));
                double phi = get_d(p, "phi", 1.2345);
                RandomStream rng(seed, stream);
                double acc = 0.0, acc2 = 0.0;
                for (uint64_t i = 0; i < trials; ++i) {
                    double e = wrap_pm_pi(boosted_suppressed_pe(phi, M, m, n, rng) - phi);
                    acc += e;
                    acc2 += e * e;
                }
                double mean = acc / double(trials);
                double var = acc2 / double(trials) - mean * mean;
                double se = std::sqrt(std::max(var, 0.0) / double(trials));
                double bound = 32.0 * kPi * double(m + 1) * std::ldexp(1.0, -n);
                add_row(t, {fmt(M), fmt(m), fmt(n), fmt(phi), fmt(trials),
                            fmt(mean), fmt(se), fmt(bound), fmt(stream)});
                ++stream;
            },
            {"M", "m", "n", "phi", "trials", "bias", "stderr", "bias_bound",
             "stream_id"}};

        r["norm_conversion"] = Experiment{
            "randomized checks of the amplitude->probability and the l_inf "
            "truncation norm-conversion bounds",
            [](const Point& p, uint64_t seed, uint64_t& stream, ResultTable& t) {
                uint64_t trials = uint64_t(get_l(p, "trials", 10000));
                RandomStream rng(seed, stream);
                uint64_t bad_amp = 0, bad_trunc = 0;
                for (uint64_t i = 0; i < trials; ++i) {
                    Eigen::Index d = 2 + Eigen::Index(rng.uniform_int(63));
                    double eps = std::pow(10.0, -3.0 * rng.uniform() - 0.7);
                    Ket psi = random_ket(d, rng);
                    // amplitude -> probability at l_q, q from {2, 4, inf}
                    double qs[3] = {2.0, 4.0, q_inf()};
                    double q = qs[rng.uniform_int(3)];
                    RVec mag = psi.amps.cwiseAbs();
                    RVec est(d);
                    for (Eigen::Index j = 0; j < d; ++j)
                        est(j) = std::max(0.0, mag(j) + eps * (2.0 * rng.uniform() - 1.0));
                    // scale the perturbation so the l_q error is <= eps
                    RVec diff = est - mag;
                    double nq = norm_vec(RVec(diff), q);
                    if (nq > eps) est = mag + diff * (eps / nq);
                    RVec ptru = mag.cwiseProduct(mag);
                    RVec phat = amp_to_prob(est, q);
                    double tq = amp_to_prob_t(q);
                    if (norm_vec(RVec(phat - ptru), tq) > 4.0 * eps + 1e-12)
                        ++bad_amp;
                    // l_inf perturbation + threshold truncation, s = 2
                    double qq = 2.5 + 10.0 * rng.uniform();
                    if (rng.uniform() < 0.25) qq = q_inf();
                    Vec noisy(d);
                    for (Eigen::Index j = 0; j < d; ++j)
                        noisy(j) = psi.amps(j) +
                                   eps * cplx(2.0 * rng.uniform() - 1.0,
                                              2.0 * rng.uniform() - 1.0) / std::sqrt(2.0);
                    Vec out = threshold_truncate(noisy, eps);
                    double bound = truncate_error_bound(eps, 1.0, qq, 2.0, d);
                    if (norm_vec(Vec(psi.amps - out), qq) > bound + 1e-12)
                        ++bad_trunc;
                }
                add_row(t, {fmt(trials), fmt(bad_amp), fmt(bad_trunc), fmt(stream)});
                ++stream;
            },
            {"trials", "violations_amp_to_prob", "violations_truncate",
             "stream_id"}};

        r["pure_tomo_scaling"] = Experiment{
            "pure-state tomography error/cost per model over a grid",
            [](const Point& p, uint64_t seed, uint64_t& stream, ResultTable& t) {
                std::string model = get_s(p, "model", "classical");
                Eigen::Index d = get_l(p, "d", 8);
                double eps = get_d(p, "eps", 0.1);
                double delta = get_d(p, "delta", 0.1);
                long trials = get_l(p, "trials", 20);
                uint64_t first = stream;
                uint64_t fails = 0;
                double sq = 0, ss = 0, serr = 0;
                for (long i = 0; i < trials; ++i) {
                    RandomStream rng(seed, stream++);
                    Ket psi = random_ket(d, rng);
                    TomographyResult res;
                    double err = 0.0;
                    if (model == "classical") {
                        res = classical_linf_tomo(psi, eps, delta, rng);
                        err = norm_vec(Vec(res.estimate - psi.amps.cwiseAbs().cast<cplx>()),
                                       q_inf());
                    } else if (model == "conditional") {
                        res = cond_sample_tomo(psi, eps, delta, rng);
                        err = norm_vec(Vec(res.estimate - psi.amps), q_inf());
                    } else if (model == "copies") {
                        res = copies_only_tomo(psi, eps, delta, rng);
                        err = aligned_linf_error(psi.amps, res.estimate);
                    } else if (model == "unitary") {
                        res = pe_state_tomo(psi, eps, delta, rng);
                        err = aligned_linf_error(psi.amps, res.estimate);
                    } else if (model == "sparse") {
                        int s = int(get_l(p, "s", 4));
                        Vec a = Vec::Zero(d);
                        for (int k = 0; k < s; ++k)
                            a(Eigen::Index(rng.uniform_int(uint64_t(d)))) +=
                                cplx(rng.normal(), rng.normal());
                        if (a.norm() < 1e-12) a(0) = 1.0;
                        Ket sparse_psi(Vec(a / a.norm()));
                        res = sparse_tomo(sparse_psi, s, eps, delta, rng);
                        err = aligned_linf_error(sparse_psi.amps, res.estimate);
                    } else {
                        require(false, "run: unknown tomography model " + model);
                    }
                    fails += (err > eps);
                    sq += double(res.ledger.queries_U + res.ledger.queries_U_dagger);
                    ss += double(res.samples);
                    serr += err;
                }
                add_row(t, {model, fmt(long(d)), fmt(eps), fmt(delta),
                            fmt(trials), fmt(double(fails) / double(trials)),
                            fmt(sq / double(trials)), fmt(ss / double(trials)),
                            fmt(serr / double(trials)), fmt(1.0 / eps),
                            fmt(first)});
            },
            {"model", "d", "eps", "delta", "trials", "fail_frac",
             "mean_queries", "mean_samples", "mean_error", "inv_eps",
             "stream_id"}};

        r["mixed_tomo"] = Experiment{
            "mixed-state tomography Schatten-q success fraction",
            [](const Point& p, uint64_t seed, uint64_t& stream, ResultTable& t) {
                Eigen::Index d = get_l(p, "d", 4);
                int rk = int(get_l(p, "r", 2));
                double eps = get_d(p, "eps", 0.2);
                double delta = get_d(p, "delta", 1.0 / 3.0);
                std::string qs = get_s(p, "q", "1");
                double q = (qs == "inf") ? q_inf() : std::stod(qs);
                long trials = get_l(p, "trials", 10);
                uint64_t first = stream;
                uint64_t ok = 0;
                double sqq = 0;
                for (long i = 0; i < trials; ++i) {
                    RandomStream rng(seed, stream++);
                    Mat rho = random_density(d, rk, rng);
                    MixedTomoResult res = mixed_tomo(rho, rk, eps, delta, q, rng);
                    ok += (schatten_err(rho, res.rho_tilde, q) <= eps);
                    sqq += double(res.ledger.queries_U);
                }
                add_row(t, {fmt(long(d)), fmt(rk), fmt(eps), fmt(delta), qs,
                            fmt(trials), fmt(double(ok) / double(trials)),
                            fmt(sqq / double(trials)), fmt(first)});
            },
            {"d", "r", "eps", "delta", "q", "trials", "success_frac",
             "mean_queries", "stream_id"}};

        r["direct_tomo"] = Experiment{
            "copies-based direct mixed tomography (trace norm)",
            [](const Point& p, uint64_t seed, uint64_t& stream, ResultTable& t) {
                Eigen::Index d = get_l(p, "d", 4);
                int rk = int(get_l(p, "r", 2));
                double eps = get_d(p, "eps", 0.3);
                long trials = get_l(p, "trials", 20);
                uint64_t first = stream;
                uint64_t ok = 0;
                double sc = 0;
                for (long i = 0; i < trials; ++i) {
                    RandomStream rng(seed, stream++);
                    Mat rho = random_density(d, rk, rng);
                    DirectSampleResult res = direct_sample_tomo(rho, rk, eps, rng);
                    ok += (schatten_err(rho, res.rho_tilde, 1.0) <= eps);
                    sc += double(res.copies);
                }
                double budget = double(rk) * double(d) * double(d) / (eps * eps);
                add_row(t, {fmt(long(d)), fmt(rk), fmt(eps), fmt(trials),
                            fmt(double(ok) / double(trials)),
                            fmt(sc / double(trials)), fmt(budget), fmt(first)});
            },
            {"d", "r", "eps", "trials", "success_frac", "mean_copies",
             "budget_rd2_eps2", "stream_id"}};

        r["expval"] = Experiment{
            "simultaneous expectation values of m observables",
            [](const Point& p, uint64_t seed, uint64_t& stream, ResultTable& t) {
                Eigen::Index d = get_l(p, "d", 8);
                int m = int(get_l(p, "m", 8));
                double eps = get_d(p, "eps", 0.1);
                double delta = get_d(p, "delta", 0.05);
                long trials = get_l(p, "trials", 10);
                uint64_t first = stream;
                uint64_t ok = 0;
                double sq = 0;
                for (long i = 0; i < trials; ++i) {
                    RandomStream rng(seed, stream++);
                    std::vector<Mat> E;
                    for (int k = 0; k < m; ++k) {
                        Mat g(d, d);
                        for (Eigen::Index a = 0; a < d; ++a)
                            for (Eigen::Index b2 = 0; b2 < d; ++b2)
                                g(a, b2) = cplx(rng.normal(), rng.normal());
                        Mat h = (g + g.adjoint()) / 2.0;
                        E.push_back(h / norm_mat(h, q_inf()));
                    }
                    Mat rho = random_density(d, int(d), rng);
                    ObservableSet obs =
                        make_observable_set(E, RVec::Constant(m, eps), delta);
                    MultiExpResult res = multi_expectation(rho, obs, delta, rng);
                    bool good = true;
                    for (int k = 0; k < m; ++k)
                        good = good && std::abs(res.z[size_t(k)] -
                                                res.truth[size_t(k)]) <= eps;
                    ok += good;
                    sq += double(res.ledger.queries_U);
                }
                add_row(t, {fmt(long(d)), fmt(m), fmt(eps), fmt(delta),
                            fmt(trials), fmt(double(ok) / double(trials)),
                            fmt(sq / double(trials)), fmt(first)});
            },
            {"d", "m", "eps", "delta", "trials", "success_frac",
             "mean_queries", "stream_id"}};

        r["jordan_failure"] = Experiment{
            "per-coordinate failure rate of the gradient grid sampler",
            [](const Point& p, uint64_t seed, uint64_t& stream, ResultTable& t) {
                int b = int(get_l(p, "b", 4));
                long N = 1L << b;
                uint64_t trials = uint64_t(get_l(p, "trials", 20000));
                RandomStream rng(seed, stream);
                uint64_t bad = 0;
                for (uint64_t i = 0; i < trials; ++i) {
                    double g = rng.uniform() - 0.5;
                    double smp = jordan_coord_sample(g, b, rng);
                    if (std::fabs(smp - g) > 1.0 / double(N)) ++bad;
                }
                add_row(t, {fmt(b), fmt(long(N)), fmt(trials),
                            fmt(double(bad) / double(trials)), fmt(stream)});
                ++stream;
            },
            {"b", "N", "trials", "fail_frac", "stream_id"}};

        r["probset_entropy"] = Experiment{
            "hardness distribution family: spectrum and entropy bound",
            [](const Point& p, uint64_t, uint64_t& stream, ResultTable& t) {
                long d = get_l(p, "d", 12);
                double eps = get_d(p, "eps", 0.05);
                ProbsetFamily f = probset_build(d, eps);
                add_row(t, {fmt(d), fmt(eps), fmt(f.top_eig), fmt(f.small_eig),
                            fmt(f.entropy), fmt(f.entropy_bound), fmt(stream)});
                ++stream;
            },
            {"d", "eps", "top_eig", "small_eig", "entropy", "entropy_bound",
             "stream_id"}};

        r["qram_counts"] = Experiment{
            "reversible netlist gate/depth/ancilla counts",
            [](const Point& p, uint64_t, uint64_t& stream, ResultTable& t) {
                int d = int(get_l(p, "d", 8));
                std::string kind = get_s(p, "circuit", "icnoto");
                CircuitNetlist net;
                if (kind == "icnoto")
                    net = build_indexed_cnot(d, CnotDirection::out);
                else if (kind == "icnoti")
                    net = build_indexed_cnot(d, CnotDirection::in);
                else if (kind == "iswap")
                    net = build_indexed_swap(d, SwapKind::single);
                else if (kind == "iiswap")
                    net = build_indexed_swap(d, SwapKind::double_);
                else
                    require(false, "run: unknown circuit kind " + kind);
                add_row(t, {kind, fmt(d), fmt(net.count_cnot()),
                            fmt(net.count_toffoli()), fmt(net.count_x()),
                            fmt(net.depth), fmt(net.n_ancilla), fmt(stream)});
                ++stream;
            },
            {"circuit", "d", "cnot", "toffoli", "x", "depth", "ancillas",
             "stream_id"}};

        return r;
    }();
    return reg;
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    bool in_grid = false;
    while (std::getline(is, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            require(line.back() == ']', "config: malformed section header: " + line);
            std::string sec = trim(line.substr(1, line.size() - 2));
            require(sec == "grid", "config: unknown section " + sec);
            in_grid = true;
            continue;
        }
        size_t eq = line.find('=');
        require(eq != std::string::npos, "config: expected key = value: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (in_grid) {
            cfg.grid[key] = split_list(val);
        } else if (key == "experiment") {
            cfg.experiment = val;
        } else if (key == "seed") {
            cfg.seed = std::stoull(val);
        } else if (key == "output") {
            cfg.output = val;
        } else if (key == "format") {
            require(val == "csv" || val == "json", "config: format must be csv or json");
            cfg.format = val;
        } else {
            require(false, "config: unknown top-level key " + key);
        }
    }
    require(!cfg.experiment.empty(), "config: missing experiment name");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    require(bool(f), "config: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

int ResultTable::col(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : int(it - columns.begin());
}

std::string ResultTable::to_csv() const {
    std::ostringstream os;
    for (size_t c = 0; c < columns.size(); ++c)
        os << columns[c] << (c + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows)
        for (size_t c = 0; c < row.size(); ++c)
            os << row[c] << (c + 1 < row.size() ? "," : "\n");
    return os.str();
}

std::string ResultTable::to_json() const {
    auto is_number = [](const std::string& s) {
        if (s.empty()) return false;
        char* end = nullptr;
        std::strtod(s.c_str(), &end);
        return end == s.c_str() + s.size();
    };
    std::ostringstream os;
    os << "[";
    for (size_t r = 0; r < rows.size(); ++r) {
        os << (r ? ",\n " : "\n ") << "{";
        for (size_t c = 0; c < columns.size() && c < rows[r].size(); ++c) {
            os << (c ? ", " : "") << "\"" << columns[c] << "\": ";
            if (is_number(rows[r][c]))
                os << rows[r][c];
            else
                os << "\"" << rows[r][c] << "\"";
        }
        os << "}";
    }
    os << "\n]\n";
    return os.str();
}

std::vector<std::string> list_experiments() {
    std::vector<std::string> names;
    for (const auto& [name, exp] : registry())
        names.push_back(name + "  -  " + exp.description);
    return names;
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
    auto it = registry().find(cfg.experiment);
    require(it != registry().end(), "run: unknown experiment " + cfg.experiment);
    ResultTable t;
    t.columns = it->second.columns;
    uint64_t stream = 0;
    for (const Point& p : expand_grid(cfg))
        it->second.run(p, cfg.seed, stream, t);
    return t;
}

FitResult fit_scaling(const ResultTable& t, const std::string& x_param,
                      const std::string& y_column) {
    int xc = t.col(x_param), yc = t.col(y_column);
    require(xc >= 0 && yc >= 0, "fit_scaling: unknown column");
    std::vector<double> xs, ys;
    for (const auto& row : t.rows) {
        double x = std::stod(row[size_t(xc)]);
        double y = std::stod(row[size_t(yc)]);
        require(x > 0.0 && y > 0.0, "fit_scaling: values must be positive");
        xs.push_back(std::log(x));
        ys.push_back(std::log(y));
    }
    std::vector<double> ux = xs;
    std::sort(ux.begin(), ux.end());
    ux.erase(std::unique(ux.begin(), ux.end()), ux.end());
    require(ux.size() >= 3, "fit_scaling: need >= 3 distinct x values");
    require(ux.back() - ux.front() > 1e-12, "fit_scaling: degenerate x range");
    double n = double(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    FitResult f;
    double vx = sxx - sx * sx / n;
    double cxy = sxy - sx * sy / n;
    double vy = syy - sy * sy / n;
    f.slope = cxy / vx;
    f.intercept = (sy - f.slope * sx) / n;
    f.r2 = (vy <= 1e-300) ? 1.0 : (cxy * cxy) / (vx * vy);
    return f;
}

// ------------------------------------------------------------- verification

namespace {

struct Checker {
    std::string out;
    bool ok = true;
    void check(bool cond, const std::string& what) {
        out += std::string(cond ? "  ok   " : "  FAIL ") + what + "\n";
        ok = ok && cond;
    }
};

} // namespace

std::vector<std::string> module_names() {
    return {"core",      "rng",     "norms",    "blockenc", "phaseest",
            "gradest",   "tomo_pure", "expval", "tomo_mixed", "hardness",
            "qram",      "harness"};
}

bool verify_module(const std::string& name, std::string* report) {
    Checker c;
    RandomStream rng(12345, 0);
    if (name == "core") {
        auto labels = grid_labels(3);
        c.check(labels.size() == 8, "grid G_3 has 8 labels");
        c.check(std::fabs(labels[0].x + 0.5 - 1.0 / 16.0) < 1e-15,
                "first label j/2^n - 1/2 + 2^{-n-1}");
        Ket u = Ket::uniform(8);
        Ket f = qft_grid(u, 3, 1);
        c.check(std::fabs(f.amps.norm() - 1.0) < 1e-12, "grid QFT is unitary");
    } else if (name == "rng") {
        RandomStream a(7, 3), b(7, 3);
        bool same = true;
        for (int i = 0; i < 100; ++i) same = same && (a.next_u64() == b.next_u64());
        c.check(same, "streams with equal (seed, id) are identical");
        double acc = 0;
        RandomStream r2(7, 4);
        for (int i = 0; i < 20000; ++i) acc += double(r2.binomial(1000, 0.3));
        c.check(std::fabs(acc / 20000.0 - 300.0) < 2.0, "binomial mean n*p");
    } else if (name == "norms") {
        Mat m = Mat::Random(6, 6);
        Mat h = (m + m.adjoint()) / 2.0;
        Mat proj = psd_rank_project(h, 0.1, 2);
        Eigen::SelfAdjointEigenSolver<Mat> es(proj);
        c.check(es.eigenvalues().minCoeff() > -1e-12, "projection PSD");
        c.check(proj.trace().real() <= 1.0 + 1e-12, "projection trace <= 1");
        c.check(linf_precision_for_lq(0.1, q_inf(), 2.0, 8) > 0, "eta positive");
    } else if (name == "phaseest") {
        std::vector<double> probs = pe_outcome_probs(1.0, 16, 0.25);
        double s = 0;
        for (double p : probs) s += p;
        c.check(std::fabs(s - 1.0) < 1e-10, "outcome probabilities sum to 1");
        std::vector<double> sv = pe_statevector_probs(1.0, 16, 0.25);
        double dev = 0;
        for (size_t i = 0; i < sv.size(); ++i)
            dev = std::max(dev, std::fabs(sv[i] - probs[i]));
        c.check(dev < 1e-10, "closed form matches statevector");
        c.check(std::fabs(lambda_factor(16) - 0.9375) < 1e-15, "lambda(16)");
    } else if (name == "blockenc" || name == "gradest") {
        PhaseValueOracle o = linear_phase_oracle({0.25, -0.125}, 8);
        GradEstimate g = block_to_grad(o, 0.1, 0.1, rng);
        c.check(std::fabs(g.k[0] - 0.25) <= 0.1 && std::fabs(g.k[1] + 0.125) <= 0.1,
                "block_to_grad recovers a linear gradient");
        c.check(g.oracle_queries > 0, "ledger populated");
    } else if (name == "tomo_pure") {
        Ket psi = random_ket(6, rng);
        TomographyResult res = cond_sample_tomo(psi, 0.15, 0.1, rng);
        c.check(norm_vec(Vec(res.estimate - psi.amps), q_inf()) <= 0.15,
                "conditional-sample tomography within eps");
    } else if (name == "expval") {
        Mat z = Mat::Zero(2, 2);
        z(0, 0) = 1.0;
        z(1, 1) = -1.0;
        ObservableSet obs = make_observable_set({z}, RVec::Constant(1, 0.2), 0.05);
        Mat rho = Mat::Zero(2, 2);
        rho(0, 0) = 1.0;
        MultiExpResult res = multi_expectation(rho, obs, 0.05, rng);
        c.check(std::fabs(res.z[0] - 1.0) <= 0.2, "<Z> on |0> within eps");
    } else if (name == "tomo_mixed") {
        auto pair = pair_observables(4);
        Mat sum = Mat::Zero(4, 4);
        for (const Mat& e : pair) sum += e * e;
        c.check((sum - 4.0 * Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10,
                "sum of squared pair observables = d I");
    } else if (name == "hardness") {
        MubFamily fam = mub_build(5, 5);
        double worst = 0;
        for (long l = 0; l < 5; ++l)
            for (long m = 0; m < 5; ++m) {
                Vec v = mub_eigenvector(fam, l, m);
                double lam = mub_eigenvalue(fam, l, m);
                worst = std::max(worst,
                                 (fam.M * v - lam * v).cwiseAbs().maxCoeff());
            }
        c.check(worst < 1e-9, "MUB eigenvector/eigenvalue identity");
        c.check(std::fabs(2.0 * fam.A.trace() - 2.0 * 25.0 * 5.0) < 1e-9,
                "E[delta^T A delta] = 2 d^2 r");
    } else if (name == "qram") {
        CircuitNetlist net = build_indexed_cnot(8, CnotDirection::out);
        c.check(net.count_cnot() == 8, "iCNOTo d=8 CNOT count");
        bool sem = true;
        for (int i = 0; i < 8 && sem; ++i) {
            std::vector<uint8_t> in(size_t(net.n_qubits()), 0);
            for (int l = 0; l < 3; ++l) in[size_t(l)] = uint8_t((unsigned(i) >> l) & 1);
            in[size_t(4 + i)] = 1;  // q_i = 1, b = 0
            auto out = simulate_netlist(net, in);
            sem = sem && out[3] == 1;
            out[3] = 0;
            sem = sem && (out == in);
        }
        c.check(sem, "iCNOTo semantics and ancilla restoration");
    } else if (name == "harness") {
        ExperimentConfig cfg = parse_config_text(
            "experiment = grid_labels\nseed = 9\n[grid]\nn = 3\n");
        ResultTable t1 = run_experiment(cfg);
        ResultTable t2 = run_experiment(cfg);
        c.check(t1.to_csv() == t2.to_csv(), "rerun is byte-identical");
        c.check(t1.rows.size() == 8, "grid_labels n=3 emits 8 rows");
    } else {
        c.check(false, "unknown module " + name);
    }
    if (report) *report = c.out;
    return c.ok;
}

void calibrate_data(const std::string& data_dir, uint64_t seed,
                    std::ostream* log) {
    // lambda cache
    {
        LambdaCache cache(data_dir + "/lambda_cache.txt");
        RandomStream rng(seed, 0);
        for (long M : {8L, 16L, 32L, 64L, 128L}) {
            LambdaTable lt = cache.get(M, 0, 200000, rng);
            if (log)
                *log << "lambda M=" << M << " m=0: " << lt.lambda
                     << " (closed form " << lambda_factor(M) << ")\n";
        }
        for (int m : {4, 8}) {
            LambdaTable lt = cache.get(64, m, 100000, rng);
            if (log) *log << "lambda M=64 m=" << m << ": " << lt.lambda << "\n";
        }
        cache.save();
    }
    // operator-norm concentration constants: C' from the 99.9% quantile of
    // ||E|| / (eps sqrt(d)) over random-sign matrices, c' = ln(2/level)/16.
    {
        double level = 0.001;
        double cp = 0.0;
        Eigen::Index d_max = 0;
        int trials = 2000;
        RandomStream rng(seed, 1);
        for (Eigen::Index d : {16, 32, 64}) {
            OpNormStats st =
                subgaussian_opnorm_stats(d, 0.05, trials, rng, {1.0 - level});
            double ratio = st.quantiles.begin()->second / (0.05 * std::sqrt(double(d)));
            cp = std::max(cp, ratio);
            d_max = std::max(d_max, d);
            if (log)
                *log << "opnorm d=" << d << " quantile ratio " << ratio << "\n";
        }
        OpNormConstants consts;
        consts.Cprime = cp;
        consts.cprime = std::log(2.0 / level) / 16.0;
        save_opnorm_constants(data_dir + "/opnorm_constants.txt", consts, d_max,
                              trials, seed, 1.0 - level);
        if (log)
            *log << "C' = " << consts.Cprime << ", c' = " << consts.cprime << "\n";
    }
}

} // namespace qet
