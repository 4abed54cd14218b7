#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "helico/analysis.hpp"
#include "helico/deform.hpp"
#include "helico/errors.hpp"
#include "helico/expr.hpp"

namespace helico::cli {

using nlohmann::ordered_json;

namespace {

std::string num(double v)
{
    if (!std::isfinite(v))
        return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

// JSON numbers that keep all 17 digits in the dump.
ordered_json jnum(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    return ordered_json::parse(num(v));
}

ordered_json jarray(const std::vector<double>& vs)
{
    ordered_json a = ordered_json::array();
    for (double v : vs)
        a.push_back(jnum(v));
    return a;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

class Csv {
public:
    explicit Csv(std::ostream& os) : os_(os) {}
    void header(const std::vector<std::string>& names)
    {
        for (std::size_t i = 0; i < names.size(); ++i)
            os_ << (i ? "," : "") << names[i];
        os_ << '\n';
    }
    void row(const std::vector<double>& vs)
    {
        for (std::size_t i = 0; i < vs.size(); ++i)
            os_ << (i ? "," : "") << num(vs[i]);
        os_ << '\n';
    }

private:
    std::ostream& os_;
};

struct Output {
    std::ofstream file;
    std::ostream* os;
    Output(const std::string& path, std::ostream& fallback) : os(&fallback)
    {
        if (!path.empty()) {
            file.open(path, std::ios::binary);
            if (!file)
                throw validation_error("io", "cannot open output file '" + path + "'");
            os = &file;
        }
    }
    std::ostream& operator*() { return *os; }
};

Expr parse_field(const ordered_json& j, const char* key)
{
    if (!j.contains(key) || !j[key].is_string())
        throw validation_error("scene", std::string("scene field '") + key + "' must be an expression string");
    return parse(j[key].get<std::string>());
}

std::vector<double> c_grid(double c_max, double c_step)
{
    if (!(c_step > 0.0))
        throw validation_error("usage", "--c-step must be positive");
    std::vector<double> cs;
    int n = static_cast<int>(std::floor(std::fabs(c_max) / c_step + 1e-9));
    double sgn = c_max < 0 ? -1.0 : 1.0;
    for (int k = 0; k <= n; ++k)
        cs.push_back(sgn * c_step * k);
    return cs;
}

const char* status_name(const ContinuationResult& r) { return r.complete() ? "complete" : "fold"; }

FocalBranch parse_branch(const std::string& s)
{
    if (s == "plus")
        return FocalBranch::Plus;
    if (s == "minus")
        return FocalBranch::Minus;
    return FocalBranch::Auto;
}

const char* branch_name(FocalBranch b)
{
    switch (b) {
    case FocalBranch::Plus:
        return "plus";
    case FocalBranch::Minus:
        return "minus";
    default:
        return "auto";
    }
}

const char* kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::Parse:
        return "parse";
    case ErrorKind::Domain:
        return "domain";
    case ErrorKind::Validation:
        return "validation";
    default:
        return "numeric";
    }
}

void write_error(std::ostream& err, const std::string& kind, const std::string& code, const std::string& message,
                 const std::vector<double>& where = {})
{
    ordered_json j;
    j["error"]["kind"] = kind;
    j["error"]["code"] = code;
    j["error"]["message"] = message;
    j["error"]["where"] = jarray(where);
    err << j.dump() << '\n';
}

ordered_json track_json(const TrackReport& rep)
{
    ordered_json j;
    j["status"] = status_name(rep.result);
    j["message"] = rep.result.message;
    j["points"] = rep.result.branch.size();
    j["violations"] = rep.violations;
    return j;
}

void write_branch(std::ostream& os, const TrackReport& rep, const char* residual_name)
{
    Csv csv(os);
    csv.header({"c", "t", residual_name});
    for (std::size_t i = 0; i < rep.result.branch.size(); ++i)
        csv.row({rep.result.branch[i].first, rep.result.branch[i].second, rep.residuals[i]});
}

void write_mesh(std::ostream& os, const Mesh& M)
{
    os << "# closed_in_theta " << (M.closed_in_theta ? 1 : 0) << '\n';
    os << "# grid " << M.t_count << ' ' << M.theta_count << '\n';
    for (const auto& v : M.vertices)
        os << "v " << num(v.x()) << ' ' << num(v.y()) << ' ' << num(v.z()) << '\n';
    for (const auto& n : M.normals)
        os << "vn " << num(n.x()) << ' ' << num(n.y()) << ' ' << num(n.z()) << '\n';
    for (const auto& f : M.faces)
        os << "f " << f[0] + 1 << "//" << f[0] + 1 << ' ' << f[1] + 1 << "//" << f[1] + 1 << ' ' << f[2] + 1 << "//"
           << f[2] + 1 << '\n';
}

ordered_json probe_json(const ProbeResult& r)
{
    ordered_json j;
    j["verdict"] = to_string(r.verdict);
    j["slope"] = jnum(r.slope);
    ordered_json s = ordered_json::array();
    for (const auto& p : r.samples)
        s.push_back({{"h", jnum(p.h)}, {"left", jnum(p.left)}, {"right", jnum(p.right)}});
    j["samples"] = s;
    return j;
}

} // namespace

HelicoidalSurface Scene::surface() const
{
    return HelicoidalSurface::build(curve, axis, slant, {theta_min, theta_max});
}

Scene parse_scene(const std::string& text)
{
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("scene", std::string("scene is not valid JSON: ") + e.what());
    }
    if (!j.contains("curve") || !j["curve"].is_object())
        throw validation_error("scene", "scene needs a 'curve' object");
    if (!j.contains("domain") || !j["domain"].is_array() || j["domain"].size() != 2)
        throw validation_error("scene", "scene needs 'domain': [t_min, t_max]");
    Interval dom{j["domain"][0].get<double>(), j["domain"][1].get<double>()};
    if (!(dom.lo < dom.hi))
        throw validation_error("scene", "domain must satisfy t_min < t_max");

    const auto& c = j["curve"];
    Expr x = parse_field(c, "x"), z = parse_field(c, "z");
    auto build = [&]() {
        if (c.contains("nu")) {
            const auto& nu = c["nu"];
            return LegendreCurve::with_normal(x, z, parse_field(nu, "a"), parse_field(nu, "b"), dom);
        }
        if (c.contains("phi"))
            return LegendreCurve::with_angle(x, z, parse_field(c, "phi"), dom);
        return LegendreCurve::from_tangent(x, z, dom);
    };
    Scene s{build()};
    std::string axis = j.value("axis", std::string("z"));
    if (axis != "x" && axis != "z")
        throw validation_error("scene", "axis must be \"x\" or \"z\"");
    s.axis = axis == "x" ? Axis::X : Axis::Z;
    s.slant = j.value("slant", 0.0);
    if (!std::isfinite(s.slant))
        throw validation_error("scene", "slant must be finite");
    s.samples = j.value("samples", 201);
    if (s.samples < 2)
        throw validation_error("scene", "samples must be at least 2");
    if (j.contains("theta")) {
        const auto& th = j["theta"];
        if (!th.is_array() || th.size() != 3)
            throw validation_error("scene", "theta must be [min, max, count]");
        s.theta_min = th[0].get<double>();
        s.theta_max = th[1].get<double>();
        s.theta_count = th[2].get<int>();
        if (s.theta_count < 2 || !(s.theta_min < s.theta_max))
            throw validation_error("scene", "theta needs min < max and count >= 2");
    }
    return s;
}

Scene load_scene(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw validation_error("io", "cannot read scene '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scene(ss.str());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Helicoidal surfaces generated by frontals"};
    app.require_subcommand(1);

    std::string scene_path, out_path;
    double lambda = 0.0, t0 = 0.0, c_max = 0.0, c_step = 0.05;
    std::string branch = "auto";
    bool plane = false, allow_poles = false, split_at_axis = false, on_axis = false;

    auto add_scene = [&](CLI::App* sub) {
        sub->add_option("scene", scene_path, "Scene JSON file")->required();
    };
    auto add_out = [&](CLI::App* sub) { sub->add_option("-o,--output", out_path, "Output file"); };

    auto* info = app.add_subcommand("curve-info", "Frame data, singular points and vertices of the profile");
    add_scene(info);
    add_out(info);

    auto* surface = app.add_subcommand("surface", "Surface exports");
    surface->require_subcommand(1);
    auto* mesh_cmd = surface->add_subcommand("mesh", "Triangle mesh as OBJ");
    add_scene(mesh_cmd);
    add_out(mesh_cmd);

    auto* inv = app.add_subcommand("invariants", "Closed-form basic invariants, curvature and concomitant as CSV");
    add_scene(inv);
    add_out(inv);

    auto* par = app.add_subcommand("parallel", "Parallel space profile or its plane profile");
    add_scene(par);
    add_out(par);
    par->add_option("--lambda", lambda, "Offset")->required();
    par->add_flag("--plane", plane, "Emit the plane profile");

    auto* foc = app.add_subcommand("focal", "Focal space profile with the focal parameter");
    add_scene(foc);
    add_out(foc);
    foc->add_option("--branch", branch, "plus, minus or auto")
        ->check(CLI::IsMember({"plus", "minus", "auto"}));
    foc->add_flag("--plane", plane, "Emit the plane profile");
    foc->add_flag("--allow-poles", allow_poles, "Sample sheets through infinity");
    foc->add_flag("--split-at-axis", split_at_axis, "Cross the axis with counted isometries instead of failing");
    foc->add_flag("--on-axis", on_axis, "Accept profiles lying on the axis");

    auto* tp = app.add_subcommand("track-parallel", "Follow a singular point of the deformed parallel profile in c");
    add_scene(tp);
    add_out(tp);
    tp->add_option("--lambda", lambda, "Offset")->required();
    tp->add_option("--t0", t0, "Seed parameter")->required();
    tp->add_option("--c-max", c_max, "Final slant")->required();
    tp->add_option("--c-step", c_step, "Slant step");

    auto* tf = app.add_subcommand("track-focal", "Follow a singular point of the deformed focal profile in c");
    add_scene(tf);
    add_out(tf);
    tf->add_option("--t0", t0, "Seed parameter")->required();
    tf->add_option("--c-max", c_max, "Final slant")->required();
    tf->add_option("--c-step", c_step, "Slant step");

    auto* bd = app.add_subcommand("boundedness", "Curvature behaviour at a singular point");
    add_scene(bd);
    add_out(bd);
    bd->add_option("--t0", t0, "Singular parameter")->required();

    auto* cls = app.add_subcommand("classify", "Frontal and front report of the surface");
    add_scene(cls);
    add_out(cls);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        write_error(err, "usage", "usage", e.what());
        return 2;
    }

    try {
        Scene scene = load_scene(scene_path);
        Output o(out_path, out);

        if (*info) {
            const LegendreCurve& c = scene.curve;
            ordered_json j;
            ordered_json samples = ordered_json::array();
            for (double t : c.sample_ts(scene.samples))
                samples.push_back({{"t", jnum(t)}, {"ell", jnum(c.ell(t))}, {"beta", jnum(c.beta(t))}});
            j["samples"] = samples;
            auto sp = singular_points(c);
            j["singular_points"] = jarray(sp);
            auto vr = vertices(c);
            j["vertices_degenerate_everywhere"] = vr.degenerate_everywhere;
            ordered_json vs = ordered_json::array();
            for (auto& v : vr.vertices)
                vs.push_back({{"t", jnum(v.t)}, {"ordinary", v.ordinary}});
            j["vertices"] = vs;
            bool front = true;
            for (double t : sp)
                front = front && is_front_at(c, t);
            j["frontal"] = true;
            j["front"] = front;
            *o << dump(j);
        } else if (*mesh_cmd) {
            write_mesh(*o, mesh(scene.surface(), scene.samples, scene.theta_count));
        } else if (*inv) {
            auto H = scene.surface();
            Csv csv(*o);
            csv.header({"t", "a1", "b1", "a2", "b2", "e1", "f1", "g1", "e2", "f2", "g2", "JF", "KF", "HF", "det_ag",
                        "det_bg", "det_eg", "det_fg", "det_ae"});
            for (double t : scene.curve.sample_ts(scene.samples)) {
                std::vector<double> row{t};
                for (double v : H.invariants_closed_form(t).as_array())
                    row.push_back(v);
                for (double v : H.concomitant_closed_form(t))
                    row.push_back(v);
                csv.row(row);
            }
        } else if (*par) {
            auto H = scene.surface();
            Csv csv(*o);
            if (plane) {
                auto p = gamma_lambda_c(H, lambda, scene.slant, scene.samples);
                csv.header({"t", "x", "z", "k"});
                for (std::size_t i = 0; i < p.ts.size(); ++i)
                    csv.row({p.ts[i], p.points[i].x(), p.points[i].y(), static_cast<double>(p.branch[i])});
            } else {
                auto sp = parallel_space_profile(H, lambda);
                csv.header({"t", "x1", "x2", "x3"});
                for (double t : scene.curve.sample_ts(scene.samples)) {
                    Vec3 q = sp.at(t);
                    csv.row({t, q.x(), q.y(), q.z()});
                }
            }
        } else if (*foc) {
            auto H = scene.surface();
            FocalOptions fo{parse_branch(branch), allow_poles};
            Csv csv(*o);
            if (plane) {
                auto sp = focal_space_profile(H, fo);
                auto p = delta_c(H, fo, {scene.samples, split_at_axis, on_axis});
                csv.header({"t", "x", "z", "lambda"});
                for (std::size_t i = 0; i < p.ts.size(); ++i) {
                    auto l = sp.lambda.try_eval(p.ts[i]);
                    csv.row({p.ts[i], p.points[i].x(), p.points[i].y(), l ? *l : std::nan("")});
                }
            } else {
                auto sp = focal_space_profile(H, fo);
                csv.header({"t", "x1", "x2", "x3", "lambda"});
                for (double t : scene.curve.sample_ts(scene.samples)) {
                    auto a = sp.x1.try_eval(t), b = sp.x2.try_eval(t), z = sp.x3.try_eval(t), l = sp.lambda.try_eval(t);
                    if (!a || !b || !z || !l)
                        continue;
                    csv.row({t, *a, *b, *z, *l});
                }
            }
        } else if (*tp) {
            auto H = scene.surface();
            auto rep = track_parallel_singularity(H, lambda, t0, c_grid(c_max, c_step));
            if (out_path.empty())
                throw validation_error("usage", "track-parallel needs -o for the branch CSV");
            write_branch(*o, rep, "phi_residual");
            out << dump(track_json(rep));
        } else if (*tf) {
            auto H = scene.surface();
            auto rep = track_focal_singularity(H, t0, c_grid(c_max, c_step));
            if (out_path.empty())
                throw validation_error("usage", "track-focal needs -o for the branch CSV");
            write_branch(*o, rep, "residual");
            ordered_json j = track_json(rep);
            j["branch"] = branch_name(rep.branch);
            j["ordinary_vertex"] = rep.ordinary_vertex;
            j["kf_nonzero"] = rep.kf_nonzero;
            j["xbar_nonzero"] = rep.xbar_nonzero;
            j["delta1"] = jnum(rep.delta1);
            j["delta2"] = jnum(rep.delta2);
            out << dump(j);
        } else if (*bd) {
            auto H = scene.surface();
            auto p = profile_at_singularity(H, t0);
            ordered_json j;
            j["t0"] = jnum(p.t0);
            j["m"] = p.m;
            j["front"] = p.is_front;
            j["x0"] = jnum(p.x0);
            j["cos_phi0"] = jnum(p.cos_phi0);
            j["phi_order"] = p.phi_order ? ordered_json(*p.phi_order) : ordered_json(nullptr);
            for (Quantity q : {Quantity::K, Quantity::H}) {
                auto c = q == Quantity::K ? classify_K(p) : classify_H(p);
                ordered_json e;
                e["table"] = to_string(c.verdict);
                e["rule"] = c.rule;
                e["probe"] = probe_json(boundedness_probe(H, t0, q));
                j[q == Quantity::K ? "K" : "H"] = e;
            }
            *o << dump(j);
        } else if (*cls) {
            auto r = classify_frontal_front(scene.surface());
            ordered_json j;
            j["frontal"] = r.is_frontal;
            j["front"] = r.is_front;
            j["witnesses"] = jarray(r.witnesses);
            *o << dump(j);
        }
        return 0;
    } catch (const Error& e) {
        write_error(err, kind_name(e.kind()), e.code(), e.what(), e.where());
        if (e.code() == "usage")
            return 2;
        return e.kind() == ErrorKind::Numeric ? 4 : 3;
    }
}

} // namespace helico::cli
