// Command-line front end: transform, verify, extract, analyze.
//
// Exit codes: 0 success (verify: equivalent within delta), 1 verify budget
// exceeded, 2 parse/input error, 3 infeasible parameters, 4 unsupported
// dimension.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "netmorph/classify.hpp"
#include "netmorph/errors.hpp"
#include "netmorph/pwl1d.hpp"
#include "netmorph/regress.hpp"
#include "netmorph/serialize.hpp"
#include "netmorph/verify.hpp"

using namespace netmorph;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool looks_like_pwl(const std::string& text) {
    return text.find("\"breakpoints\"") != std::string::npos &&
           text.find("\"neurons\"") == std::string::npos;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open " + path + " for writing");
    out << text << "\n";
}

struct Options {
    std::string in, against, out, report, cover;
    std::string mode = "wide";
    std::string task = "regression";
    double delta = 0.05;
    double B = 1.0;
    double tol = kDefaultValueTol;
    uint64_t samples = 1000000;
    uint64_t seed = 0;
    std::optional<double> mu;
    double nsum = 0.0;
    double nsum_min = 4.0, nsum_max = 100.0;
    double L = 4.0, n = 5.0, alpha = 1.0;
};

int run_transform(const Options& opt) {
    const TransformTask task = opt.mode == "deep" ? TransformTask::Deep : TransformTask::Wide;
    const std::string text = slurp(opt.in);

    if (opt.task == "classification") {
        const Network net = deserialize_network(text);
        const ClassifyResult res = classify_transform(net, task, opt.delta, opt.B, opt.seed);
        if (!opt.out.empty()) save_network(res.net, opt.out);
        std::cout << "M=" << res.M << " mode=" << opt.mode << " mu=" << res.mu << "\n";
        if (!opt.report.empty()) {
            std::ostringstream ss;
            ss << "{\n  \"M\": " << res.M << ",\n  \"mode\": \"" << opt.mode
               << "\",\n  \"mu\": " << res.mu << "\n}";
            write_text(opt.report, ss.str());
        }
        return 0;
    }

    TransformResult res = [&] {
        if (looks_like_pwl(text)) return transform_pwl(deserialize_pwl(text), task);
        const Network net = deserialize_network(text);
        if (!opt.cover.empty())
            return transform_cover(load_cover(opt.cover), task, opt.delta, opt.B, opt.mu);
        return transform(net, task, opt.delta, opt.B, opt.seed, opt.mu);
    }();
    if (!opt.out.empty()) save_network(res.net, opt.out);
    if (!opt.report.empty()) write_text(opt.report, report_to_json(res.report));
    std::cout << "M=" << res.report.M << " mode=" << res.report.mode
              << " width=" << res.report.metrics.width
              << " depth=" << res.report.metrics.depth
              << " budget=" << res.report.mismatch_budget;
    if (res.report.max_exact_error > 0.0)
        std::cout << " max_exact_error=" << res.report.max_exact_error;
    if (res.report.mu_over_budget)
        std::cout << "\nwarning: mu override sits above the delta budget";
    std::cout << "\n";
    return 0;
}

int run_verify(const Options& opt) {
    const Network a = deserialize_network(slurp(opt.in));
    const Network b = deserialize_network(slurp(opt.against));
    if (a.input_dim() != b.input_dim())
        throw input_error("verify: networks have different input dimensions");

    MismatchReport rep;
    if (a.input_dim() == 1) {
        // exact path: dense grid plus both breakpoint sets
        const double max_err = exact_compare_1d(a, b, opt.B, 100000);
        rep.samples = 100001;
        rep.seed = opt.seed;
        rep.value_tolerance = opt.tol;
        rep.estimate = max_err > opt.tol ? 1.0 : 0.0;
        rep.absolute_measure = rep.estimate > 0.0 ? 2.0 * opt.B : 0.0;
        std::cout << "max_abs_error=" << max_err << " ";
        std::cout << "delta=" << opt.delta << "\n";
        if (!opt.report.empty()) write_text(opt.report, report_to_json(rep));
        return max_err <= opt.tol ? 0 : 1;
    }
    rep = mismatch_measure(a, b, Box::centered(a.input_dim(), opt.B), opt.samples,
                           opt.seed, opt.tol, opt.task == "classification");
    std::cout << "estimate=" << rep.estimate << " stderr=" << rep.stderr_
              << " absolute=" << rep.absolute_measure << " delta=" << opt.delta << "\n";
    if (!opt.report.empty()) write_text(opt.report, report_to_json(rep));
    return rep.absolute_measure < opt.delta ? 0 : 1;
}

int run_extract(const Options& opt) {
    const Network net = deserialize_network(slurp(opt.in));
    const PwlFunction1D f = extract_pwl(net, opt.B);
    const std::string doc = serialize_pwl(f);
    if (!opt.out.empty())
        write_text(opt.out, doc);
    else
        std::cout << doc << "\n";
    return 0;
}

int run_analyze(const Options& opt) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "n_sigma,width,depth\n";
    auto row = [&](double ns) {
        const auto [w, d] = width_depth_estimate(ns, opt.L, opt.n, opt.alpha);
        csv << ns << "," << w << "," << d << "\n";
    };
    if (opt.nsum > 0.0) {
        row(opt.nsum);
    } else {
        if (opt.nsum_min <= 0.0 || opt.nsum_max < opt.nsum_min)
            throw input_error("analyze: bad N-sigma range");
        for (double ns = opt.nsum_min; ns <= opt.nsum_max; ns += 1.0) row(ns);
    }
    if (!opt.out.empty())
        write_text(opt.out, csv.str());
    else
        std::cout << csv.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"netmorph: wide/deep ReLU network transformations"};
    app.require_subcommand(1);
    Options opt;

    auto* t = app.add_subcommand("transform", "transform a network to a wide or deep form");
    t->add_option("--in", opt.in, "input network or pwl document")->required();
    t->add_option("--out", opt.out, "output network path");
    t->add_option("--mode", opt.mode, "wide|deep")->check(CLI::IsMember({"wide", "deep"}));
    t->add_option("--task", opt.task, "regression|classification")
        ->check(CLI::IsMember({"regression", "classification"}));
    t->add_option("--delta", opt.delta, "total mismatch-measure budget");
    t->add_option("--mu", opt.mu, "override mu (bypasses the parameter chooser)");
    t->add_option("--B", opt.B, "domain half-width");
    t->add_option("--seed", opt.seed, "seed for region sampling");
    t->add_option("--report", opt.report, "write the transform report here");
    t->add_option("--cover", opt.cover, "simplicial cover document (required for D > 2)");

    auto* v = app.add_subcommand("verify", "estimate the mismatch measure of two networks");
    v->add_option("--in", opt.in, "first network")->required();
    v->add_option("--against", opt.against, "second network")->required();
    v->add_option("--B", opt.B, "domain half-width");
    v->add_option("--delta", opt.delta, "pass threshold on mismatch times volume");
    v->add_option("--samples", opt.samples, "Monte Carlo samples");
    v->add_option("--seed", opt.seed, "sampling seed");
    v->add_option("--tol", opt.tol, "value tolerance");
    v->add_option("--task", opt.task, "regression|classification")
        ->check(CLI::IsMember({"regression", "classification"}));
    v->add_option("--report", opt.report, "write the mismatch report here");

    auto* e = app.add_subcommand("extract", "extract the pwl form of a univariate network");
    e->add_option("--in", opt.in, "input network")->required();
    e->add_option("--B", opt.B, "domain half-width");
    e->add_option("--out", opt.out, "output pwl document");

    auto* a = app.add_subcommand("analyze", "width/depth estimator table");
    a->add_option("--nsum", opt.nsum, "single N-sigma value");
    a->add_option("--nsum-min", opt.nsum_min, "range start (default 4)");
    a->add_option("--nsum-max", opt.nsum_max, "range end (default 100)");
    a->add_option("--L", opt.L, "product count");
    a->add_option("--n", opt.n, "variable count");
    a->add_option("--alpha", opt.alpha, "depth constant");
    a->add_option("--out", opt.out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(t)) return run_transform(opt);
        if (app.got_subcommand(v)) return run_verify(opt);
        if (app.got_subcommand(e)) return run_extract(opt);
        if (app.got_subcommand(a)) return run_analyze(opt);
    } catch (const infeasible_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    } catch (const unsupported_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 4;
    } catch (const parse_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const input_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "internal error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}
