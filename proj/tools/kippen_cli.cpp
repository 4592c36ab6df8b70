// kippen: analyze partial isometries and their Kippenhahn curves.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "kippen/criteria.hpp"
#include "kippen/document.hpp"
#include "kippen/kipp.hpp"
#include "kippen/pisom.hpp"
#include "kippen/verify.hpp"

#ifndef KIPPEN_DATA_DIR
#define KIPPEN_DATA_DIR "data"
#endif

namespace {

using namespace kippen;
using linalg::ComplexMatrix;
using linalg::cplx;
using json = nlohmann::ordered_json;

enum Exit : int { ok = 0, check_failure = 1, parse_error = 2, validation_error = 3 };

struct Failure {
    Exit code;
    std::string message;
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", std::abs(v) < 5e-13 ? 0.0 : v);
    return buf;
}

std::string point(cplx z) {
    if (std::abs(z) < 1e-9) return "0";
    return "(" + num(z.real()) + ", " + num(z.imag()) + ")";
}

struct Input {
    ComplexMatrix matrix;
    bool projected = false;  // projection changed the entries
    kipp::DetectOptions options;
};

Input load_input(const std::string& path, bool project) {
    Input in;
    try {
        in.matrix = io::load_document(path).matrix;
    } catch (const io::DocumentError& e) {
        throw Failure{e.kind() == io::DocumentError::Kind::parse ? parse_error : validation_error, e.what()};
    }
    if (project) {
        try {
            const ComplexMatrix p = pisom::project_to_partial_isometry(in.matrix);
            in.projected = (p - in.matrix).max_abs() > 1e-10;
            in.matrix = p;
        } catch (const std::invalid_argument& e) {
            throw Failure{validation_error, std::string("cannot project onto a partial isometry: ") + e.what()};
        }
        if (in.projected) in.options = kipp::DetectOptions::rounded();
    }
    return in;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Failure{check_failure, "cannot write " + path};
}

json form_json(const pisom::Defect2Form& f) {
    return {{"b", f.b}, {"c", f.c}, {"d", f.d}, {"e", f.e}, {"f", f.f}, {"g", f.g}, {"h", f.h}};
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

// Canonical parameters for rank 3; text lines appended to `os`.
json canonical_section(const pisom::PartialIsometry& pi, std::ostream& os,
                       std::optional<pisom::Defect2Form>* form_out = nullptr) {
    if (pi.rank != 3) {
        os << "canonical form: only for rank 3\n";
        return nullptr;
    }
    try {
        if (pisom::defect(pi) >= 2) {
            const auto c = pisom::canonicalize_defect2(pi);
            const auto& f = c.form;
            if (form_out) *form_out = f;
            os << "canonical (defect 2): b " << num(f.b) << "  c " << num(f.c) << "  d " << num(f.d) << "  e "
               << num(f.e) << "  f " << num(f.f) << "  g " << num(f.g) << "  h " << num(f.h) << "\n";
            os << "canonical residual " << num(c.residual) << ", rotation " << num(c.theta) << "\n";
            return {{"family", "defect2"}, {"params", form_json(f)}, {"theta", c.theta}, {"residual", c.residual}};
        }
        const auto c = pisom::canonicalize_rank3(pi);
        const auto& f = c.form;
        os << "canonical (rank 3): a " << num(f.a) << "  b " << num(f.b) << "  c " << num(f.c) << "  v " << num(f.v)
           << "  d " << point(f.d) << "  e " << point(f.e) << "  f " << point(f.f) << "  lambda2 " << point(f.lambda2)
           << "  lambda3 " << point(f.lambda3) << "\n";
        os << "canonical residual " << num(c.residual) << ", rotation " << num(c.theta) << "\n";
        return {{"family", "rank3"},
                {"params",
                 {{"a", f.a}, {"b", f.b}, {"c", f.c}, {"v", f.v}, {"d", cplx_json(f.d)}, {"e", cplx_json(f.e)},
                  {"f", cplx_json(f.f)}, {"lambda2", cplx_json(f.lambda2)}, {"lambda3", cplx_json(f.lambda3)}}},
                {"theta", c.theta},
                {"residual", c.residual}};
    } catch (const pisom::NotRealizable& e) {
        os << "canonical form: not realizable with real g (" << e.what() << ")\n";
        return {{"family", "unrealizable"}};
    } catch (const std::exception& e) {
        os << "canonical form: unavailable (" << e.what() << ")\n";
        return nullptr;
    }
}

int cmd_analyze(const std::string& path, bool project, const std::string& json_out) {
    const Input in = load_input(path, project);
    const ComplexMatrix& a = in.matrix;
    std::ostringstream os;
    json doc;
    doc["n"] = a.rows();
    doc["projected"] = in.projected;
    os << "n " << a.rows() << (in.projected ? " (projected onto the nearest partial isometry)" : "") << "\n";

    std::optional<pisom::PartialIsometry> pi;
    std::optional<pisom::Defect2Form> form;
    try {
        pi = pisom::validate(a);
    } catch (const pisom::NotPartialIsometry& e) {
        os << "not a partial isometry (singular value deviation " << num(e.max_deviation()) << ")\n";
    }
    if (pi) {
        const std::size_t def = pisom::defect(*pi);
        os << "partial isometry: rank " << pi->rank << ", kernel " << pi->kernel_dim() << ", defect " << def << "\n";
        doc["partialIsometry"] = {{"rank", pi->rank}, {"kernelDim", pi->kernel_dim()}, {"defect", def}};
        doc["canonical"] = canonical_section(*pi, os, &form);
    } else {
        doc["partialIsometry"] = nullptr;
    }

    const auto rep = kipp::detect_circles(a, in.options);
    json circles = json::array();
    if (rep.circles.empty()) os << "no circles\n";
    for (const auto& c : rep.circles) {
        if (c.degenerate)
            os << "circle center " << point(c.center) << " radius 0 (point)\n";
        else
            os << "circle center " << point(c.center) << " radius " << num(c.radius) << "\n";
        circles.push_back({{"center", cplx_json(c.center)},
                           {"radius", c.radius},
                           {"degenerate", c.degenerate},
                           {"source", kipp::to_string(c.source)},
                           {"residual", c.residual}});
    }
    doc["circles"] = std::move(circles);

    if (form) {
        const pisom::Defect2Form& f = *form;
        const double tol = in.projected ? 5e-5 : criteria::kCrithTol;
        std::string radii;
        json values = json::array();
        for (const auto& r : criteria::circles_defect2(f, tol).radii) {
            if (!values.empty() && r.value - values.back().get<double>() <= in.options.merge_tol) continue;
            radii += (radii.empty() ? "" : " ") + num(r.value);
            values.push_back(r.value);
        }
        os << "closed-form radii: " << (radii.empty() ? "none" : radii) << "\n";
        const auto verdict = criteria::disk_classification(f, tol);
        os << "closed-form disk verdict: " << (verdict.disk ? "disk" : "not a disk") << " (" << verdict.reason << ")\n";
        doc["closedForm"] = {{"radii", std::move(values)}, {"disk", verdict.disk}, {"reason", verdict.reason}};
    }

    os << "numerical radius " << num(rep.numerical_radius) << "\n";
    switch (rep.disk) {
        case kipp::DiskClass::circular_disk: os << "disk: W(A) is a circular disk\n"; break;
        case kipp::DiskClass::non_disk: os << "disk: W(A) is not a circular disk\n"; break;
        case kipp::DiskClass::undetermined: os << "disk: undetermined (within the gray zone)\n"; break;
    }
    doc["disk"] = kipp::to_string(rep.disk);
    doc["numericalRadius"] = rep.numerical_radius;
    std::cout << os.str();
    if (!json_out.empty()) write_text(json_out, doc.dump(2) + "\n");
    return ok;
}

int cmd_canon(const std::string& path, bool project, const std::string& json_out) {
    const Input in = load_input(path, project);
    pisom::PartialIsometry pi;
    try {
        pi = pisom::validate(in.matrix);
    } catch (const pisom::NotPartialIsometry& e) {
        throw Failure{validation_error, e.what()};
    }
    std::ostringstream os;
    const json canon = canonical_section(pi, os);
    std::cout << os.str();
    if (canon.is_null()) return validation_error;
    if (!json_out.empty()) write_text(json_out, canon.dump(2) + "\n");
    return ok;
}

int cmd_trace(const std::string& path, bool project, std::size_t steps, const std::string& out) {
    const Input in = load_input(path, project);
    std::string csv = "theta,branch,lambda,re,im\n";
    char line[160];
    for (const auto& p : kipp::trace_curve(in.matrix, steps)) {
        std::snprintf(line, sizeof line, "%.17g,%zu,%.17g,%.17g,%.17g\n", p.theta, p.branch, p.lambda, p.z.real(),
                      p.z.imag());
        csv += line;
    }
    write_text(out, csv);
    return ok;
}

std::string svg(const ComplexMatrix& a, std::size_t steps, const kipp::CircleReport& circles) {
    std::ostringstream os;
    char buf[128];
    auto xy = [&](cplx z) {
        std::snprintf(buf, sizeof buf, "%.6f %.6f", z.real(), z.imag());
        return std::string(buf);
    };
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" "
          "viewBox=\"-1.1 -1.1 2.2 2.2\">\n"
       << "<rect x=\"-1.1\" y=\"-1.1\" width=\"2.2\" height=\"2.2\" fill=\"white\"/>\n"
       << "<g transform=\"scale(1,-1)\" fill=\"none\">\n"
       << "<g stroke=\"#cccccc\" stroke-width=\"0.003\">\n";
    for (double r : {0.25, 0.5, 0.75, 1.0}) os << "<circle cx=\"0\" cy=\"0\" r=\"" << r << "\"/>\n";
    os << "<line x1=\"-1\" y1=\"0\" x2=\"1\" y2=\"0\"/>\n<line x1=\"0\" y1=\"-1\" x2=\"0\" y2=\"1\"/>\n</g>\n";

    const auto pts = kipp::trace_curve(a, steps);
    const std::size_t n = a.rows();
    os << "<g stroke=\"#1f4e9c\" stroke-width=\"0.006\" stroke-linejoin=\"round\">\n";
    for (std::size_t b = 0; b < n; ++b) {
        os << "<path d=\"";
        for (std::size_t j = 0; j < steps; ++j) os << (j == 0 ? "M" : " L") << xy(pts[j * n + b].z);
        os << " Z\"/>\n";
    }
    os << "</g>\n<g stroke=\"#c0392b\" stroke-width=\"0.006\" stroke-dasharray=\"0.03 0.02\">\n";
    for (const auto& c : circles.circles) {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\"/>\n", c.center.real(),
                      c.center.imag(), c.degenerate ? 0.01 : c.radius);
        os << buf;
    }
    os << "</g>\n</g>\n</svg>\n";
    return os.str();
}

int cmd_render(const std::string& path, bool project, std::size_t steps, const std::string& out) {
    const Input in = load_input(path, project);
    write_text(out, svg(in.matrix, steps, kipp::detect_circles(in.matrix, in.options)));
    return ok;
}

int cmd_fuzz(std::uint64_t seed, std::size_t trials, const std::string& theorem, const std::string& out) {
    std::optional<std::string> only;
    if (!theorem.empty()) {
        const auto ids = verify::theorem_ids();
        if (std::find(ids.begin(), ids.end(), theorem) == ids.end())
            throw Failure{parse_error, "unknown theorem id: " + theorem};
        only = theorem;
    }
    const auto reports = verify::run_suite(seed, trials, only);
    const std::string report = verify::report_json(seed, reports);
    if (out.empty()) {
        std::cout << report;
        std::cerr << verify::report_table(reports);
    } else {
        write_text(out, report);
        std::cout << verify::report_table(reports);
    }
    return verify::total_failures(reports) == 0 ? ok : check_failure;
}

int cmd_paper_examples(const std::string& data_dir) {
    const auto rep = verify::reproduce_paper_examples(data_dir);
    std::cout << verify::examples_table(rep);
    return rep.all_pass() ? ok : check_failure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kippenhahn curves and circular components of partial isometries"};
    app.require_subcommand(1);

    std::string input;
    std::string out;
    std::string json_out;
    std::string theorem;
    std::string data_dir = KIPPEN_DATA_DIR;
    bool project = false;
    std::size_t trace_steps = 0;
    std::size_t render_steps = 0;
    std::uint64_t seed = 1;
    std::size_t trials = 100;

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("input", input, "matrix document (JSON)")->required();
        sub->add_flag("--project", project, "replace the input by the nearest partial isometry");
    };

    auto* analyze = app.add_subcommand("analyze", "rank, defect, canonical form, circles, disk test");
    add_input(analyze);
    analyze->add_option("--json", json_out, "also write the report as JSON");

    auto* canon = app.add_subcommand("canon", "canonical form of a rank-3 partial isometry");
    add_input(canon);
    canon->add_option("--json", json_out, "also write the parameters as JSON");

    auto* trace = app.add_subcommand("trace", "Kippenhahn curve points as CSV");
    add_input(trace);
    trace->add_option("--steps", trace_steps, "theta samples")->default_val(720)->check(CLI::Range(1, 1 << 20));
    trace->add_option("--out", out, "CSV path (stdout when omitted)");

    auto* render = app.add_subcommand("render", "SVG drawing of the curve and detected circles");
    add_input(render);
    render->add_option("--steps", render_steps, "theta samples")->default_val(2048)->check(CLI::Range(8, 1 << 20));
    render->add_option("--out", out, "SVG path")->required();

    auto* fuzz = app.add_subcommand("fuzz", "seeded theorem checks");
    fuzz->add_option("--seed", seed, "base seed")->default_val(1);
    fuzz->add_option("--trials", trials, "accepted samples per theorem")->default_val(100)->check(CLI::PositiveNumber);
    fuzz->add_option("--theorem", theorem, "run a single check");
    fuzz->add_option("--out", out, "JSON report path (stdout when omitted)");

    auto* examples = app.add_subcommand("paper-examples", "compare the bundled examples with their published values");
    examples->add_option("--data", data_dir, "directory with the example documents");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return parse_error;
    }

    try {
        if (*analyze) return cmd_analyze(input, project, json_out);
        if (*canon) return cmd_canon(input, project, json_out);
        if (*trace) return cmd_trace(input, project, trace_steps, out);
        if (*render) return cmd_render(input, project, render_steps, out);
        if (*fuzz) return cmd_fuzz(seed, trials, theorem, out);
        if (*examples) return cmd_paper_examples(data_dir);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return check_failure;
    }
    return ok;
}
