#include "krein/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "krein/errors.hpp"
#include "krein/specfun.hpp"

namespace krein {

using json = nlohmann::json;

namespace {

int line_at_offset(const std::string& text, std::size_t off) {
    off = std::min(off, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(off), '\n'));
}

// Walk the named components of the pointer through the text; array indices are skipped.
int approximate_line(const std::string& text, const std::string& pointer) {
    std::size_t pos = 0;
    int line = 0;
    std::stringstream ss(pointer);
    std::string tok;
    while (std::getline(ss, tok, '/')) {
        if (tok.empty() || std::all_of(tok.begin(), tok.end(), ::isdigit)) continue;
        const std::size_t f = text.find('"' + tok + '"', pos);
        if (f == std::string::npos) break;
        pos = f + tok.size() + 2;
        line = line_at_offset(text, f);
    }
    return line;
}

class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    [[noreturn]] void fail(const std::string& path, const std::string& why) const {
        throw ConfigError(why + " at " + (path.empty() ? "/" : path) + " (line " +
                              std::to_string(approximate_line(text_, path)) + ")",
                          path, approximate_line(text_, path));
    }

    void only_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) const {
        if (!obj.is_object()) fail(path, "expected an object");
        for (auto it = obj.begin(); it != obj.end(); ++it)
            if (!allowed.count(it.key())) fail(path + "/" + it.key(), "unknown key '" + it.key() + "'");
    }

    double number(const json& v, const std::string& path) const {
        if (!v.is_number()) fail(path, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(path, "expected a finite number");
        return x;
    }

    int integer(const json& v, const std::string& path) const {
        if (!v.is_number_integer()) fail(path, "expected an integer");
        return v.get<int>();
    }

    bool boolean(const json& v, const std::string& path) const {
        if (!v.is_boolean()) fail(path, "expected true or false");
        return v.get<bool>();
    }

    std::string string(const json& v, const std::string& path) const {
        if (!v.is_string()) fail(path, "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> vec(const json& v, const std::string& path) const {
        if (!v.is_array()) fail(path, "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "/" + std::to_string(i)));
        return out;
    }

    std::vector<int> ivec(const json& v, const std::string& path) const {
        if (!v.is_array()) fail(path, "expected an array of integers");
        std::vector<int> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(integer(v[i], path + "/" + std::to_string(i)));
        return out;
    }

    std::vector<std::vector<double>> mat(const json& v, const std::string& path) const {
        if (!v.is_array()) fail(path, "expected an array of arrays");
        std::vector<std::vector<double>> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(vec(v[i], path + "/" + std::to_string(i)));
        return out;
    }

    const std::string& text() const { return text_; }

private:
    const std::string& text_;
};

std::string validation_path(const std::string& msg) {
    static const std::pair<const char*, const char*> table[] = {
        {"binding energ", "/binding_energies"}, {"couplings_lambda", "/couplings_lambda"},
        {"binding_energies", "/binding_energies"}, {"curve", "/curves"},
        {"distance_matrix", "/distance_matrix"}, {"mass", "/mass_m"},
        {"curvature", "/curvature_kappa"}, {"center", "/centers"},
        {"family", "/family"}, {"degenerate", "/degenerate"}};
    for (const auto& [needle, path] : table)
        if (msg.find(needle) != std::string::npos) return path;
    return "";
}

std::vector<double> point_or_fail(const std::vector<double>& v, std::size_t dim, const char* what) {
    if (v.size() != dim) throw InvalidModel(std::string(what) + " must have " + std::to_string(dim) + " coordinates");
    return v;
}

}  // namespace

Curve CurveSpec::build() const {
    if (type == "circle") {
        if (center.size() != 2 && center.size() != 3) throw InvalidModel("curve circle center must be 2D or 3D");
        if (!(radius > 0)) throw InvalidModel("curve circle radius must be positive");
        const auto c = center;
        const double r = radius;
        return curve_from_parametric(
            [c, r](double t) {
                std::vector<double> p = c;
                p[0] += r * std::cos(2 * kPi * t);
                p[1] += r * std::sin(2 * kPi * t);
                return p;
            },
            samples, true);
    }
    if (type == "segment") {
        if (from.size() != to.size() || (from.size() != 2 && from.size() != 3))
            throw InvalidModel("curve segment endpoints must share dimension 2 or 3");
        const auto a = from, b = to;
        return curve_from_parametric(
            [a, b](double t) {
                std::vector<double> p(a.size());
                for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] + t * (b[i] - a[i]);
                return p;
            },
            samples, false);
    }
    if (type == "polyline") {
        std::vector<FlatPoint> pts;
        for (const auto& p : points) pts.push_back(FlatPoint{p});
        Interpolation mode;
        if (interpolation == "smooth")
            mode = Interpolation::Smooth;
        else if (interpolation == "linear")
            mode = Interpolation::Linear;
        else
            throw InvalidModel("curve interpolation must be 'smooth' or 'linear'");
        return Curve::from_samples(std::move(pts), closed, mode);
    }
    throw InvalidModel("curve type must be circle, segment or polyline");
}

bool RunConfig::operator==(const RunConfig& o) const {
    return family == o.family && centers == o.centers && distance_matrix == o.distance_matrix && curves == o.curves &&
           couplings_lambda == o.couplings_lambda && binding_energies == o.binding_energies && mass_m == o.mass_m &&
           curvature_kappa == o.curvature_kappa && degenerate == o.degenerate && quad_order == o.quad_order &&
           tol == o.tol && window == o.window && sweep == o.sweep && wavefunction == o.wavefunction;
}

void build_model(RunConfig& c) {
    ModelSpec m;
    m.family = family_from_name(c.family);
    m.couplings = c.couplings_lambda;
    m.binding_energies = c.binding_energies;
    m.mass = c.mass_m;
    m.kappa = c.curvature_kappa;
    m.degenerate = c.degenerate;
    const std::size_t dim = static_cast<std::size_t>(ambient_dimension(m.family));
    if (is_curve_family(m.family)) {
        if (!c.centers.empty()) throw InvalidModel("curve families take 'curves', not 'centers'");
        for (std::size_t i = 0; i < c.curves.size(); ++i) {
            try {
                m.curves.push_back(c.curves[i].build());
            } catch (const Error& e) {
                throw InvalidModel("curve " + std::to_string(i) + ": " + e.what());
            }
        }
    } else if (is_hyperbolic_family(m.family)) {
        if (!c.distance_matrix.empty() && !c.centers.empty())
            throw InvalidModel("give either centers or distance_matrix, not both");
        m.distance_matrix = c.distance_matrix;
        if (!(m.kappa > 0)) throw InvalidModel("curvature_kappa must be positive");
        for (const auto& p : c.centers)
            m.hyperbolic_points.push_back(HyperbolicPoint::from_spatial(point_or_fail(p, dim, "center"), m.kappa));
    } else {
        if (!c.distance_matrix.empty()) throw InvalidModel("distance_matrix is only accepted for hyperbolic families");
        for (const auto& p : c.centers) m.points.push_back(FlatPoint{point_or_fail(p, dim, "center")});
    }
    m.validate();
    c.model = std::move(m);
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const int line = line_at_offset(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ConfigError(std::string("malformed JSON (line ") + std::to_string(line) + "): " + e.what(), "", line);
    }
    Reader rd(text);
    rd.only_keys(doc, "",
                 {"family", "centers", "distance_matrix", "curves", "couplings_lambda", "binding_energies", "mass_m",
                  "curvature_kappa", "degenerate", "quad_order", "tol", "window", "sweep", "wavefunction"});
    RunConfig c;
    if (!doc.contains("family")) rd.fail("/family", "missing required key 'family'");
    c.family = rd.string(doc["family"], "/family");
    try {
        family_from_name(c.family);
    } catch (const Error& e) {
        rd.fail("/family", e.what());
    }
    if (doc.contains("centers")) c.centers = rd.mat(doc["centers"], "/centers");
    if (doc.contains("distance_matrix")) c.distance_matrix = rd.mat(doc["distance_matrix"], "/distance_matrix");
    if (doc.contains("curves")) {
        const json& cs = doc["curves"];
        if (!cs.is_array()) rd.fail("/curves", "expected an array of curve objects");
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const std::string p = "/curves/" + std::to_string(i);
            rd.only_keys(cs[i], p,
                         {"type", "center", "radius", "from", "to", "points", "closed", "interpolation", "samples"});
            CurveSpec s;
            if (!cs[i].contains("type")) rd.fail(p + "/type", "missing required key 'type'");
            s.type = rd.string(cs[i]["type"], p + "/type");
            std::set<std::string> need, allowed{"type", "samples"};
            if (s.type == "circle") {
                need = {"center", "radius"};
            } else if (s.type == "segment") {
                need = {"from", "to"};
            } else if (s.type == "polyline") {
                need = {"points"};
                allowed.insert({"closed", "interpolation"});
                allowed.erase("samples");
            } else {
                rd.fail(p + "/type", "curve type must be circle, segment or polyline");
            }
            allowed.insert(need.begin(), need.end());
            rd.only_keys(cs[i], p, allowed);
            for (const auto& k : need)
                if (!cs[i].contains(k)) rd.fail(p + "/" + k, "missing required key '" + k + "'");
            if (cs[i].contains("center")) s.center = rd.vec(cs[i]["center"], p + "/center");
            if (cs[i].contains("radius")) s.radius = rd.number(cs[i]["radius"], p + "/radius");
            if (cs[i].contains("from")) s.from = rd.vec(cs[i]["from"], p + "/from");
            if (cs[i].contains("to")) s.to = rd.vec(cs[i]["to"], p + "/to");
            if (cs[i].contains("points")) s.points = rd.mat(cs[i]["points"], p + "/points");
            if (cs[i].contains("closed")) s.closed = rd.boolean(cs[i]["closed"], p + "/closed");
            if (cs[i].contains("interpolation"))
                s.interpolation = rd.string(cs[i]["interpolation"], p + "/interpolation");
            if (cs[i].contains("samples")) {
                s.samples = rd.integer(cs[i]["samples"], p + "/samples");
                if (s.samples < 16) rd.fail(p + "/samples", "samples must be >= 16");
            }
            if (s.type != "polyline") s.interpolation = "smooth";
            c.curves.push_back(std::move(s));
        }
    }
    if (doc.contains("couplings_lambda")) c.couplings_lambda = rd.vec(doc["couplings_lambda"], "/couplings_lambda");
    if (doc.contains("binding_energies")) c.binding_energies = rd.vec(doc["binding_energies"], "/binding_energies");
    if (doc.contains("mass_m")) c.mass_m = rd.number(doc["mass_m"], "/mass_m");
    if (doc.contains("curvature_kappa")) c.curvature_kappa = rd.number(doc["curvature_kappa"], "/curvature_kappa");
    if (doc.contains("degenerate")) c.degenerate = rd.boolean(doc["degenerate"], "/degenerate");
    if (doc.contains("quad_order")) {
        c.quad_order = rd.integer(doc["quad_order"], "/quad_order");
        if (c.quad_order < 2 || c.quad_order > 512) rd.fail("/quad_order", "quad_order must lie in [2, 512]");
    }
    if (doc.contains("tol")) {
        c.tol = rd.number(doc["tol"], "/tol");
        if (!(c.tol > 0 && c.tol <= 1e-2)) rd.fail("/tol", "tol must lie in (0, 1e-2]");
    }
    if (doc.contains("window")) {
        const json& w = doc["window"];
        rd.only_keys(w, "/window", {"e_min", "e_max"});
        WindowSpec ws;
        if (!w.contains("e_min") || !w.contains("e_max")) rd.fail("/window", "window needs e_min and e_max");
        ws.e_min = rd.number(w["e_min"], "/window/e_min");
        ws.e_max = rd.number(w["e_max"], "/window/e_max");
        if (!(ws.e_min < ws.e_max)) rd.fail("/window", "window needs e_min < e_max");
        c.window = ws;
    }
    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        rd.only_keys(s, "/sweep", {"variable", "from", "to", "steps"});
        SweepSpec sw;
        for (const char* k : {"from", "to", "steps"})
            if (!s.contains(k)) rd.fail(std::string("/sweep/") + k, std::string("missing required key '") + k + "'");
        if (s.contains("variable")) sw.variable = rd.string(s["variable"], "/sweep/variable");
        if (sw.variable != "a" && sw.variable != "lambda" && sw.variable != "mu")
            rd.fail("/sweep/variable", "sweep variable must be 'a', 'lambda' or 'mu'");
        sw.from = rd.number(s["from"], "/sweep/from");
        sw.to = rd.number(s["to"], "/sweep/to");
        sw.steps = rd.integer(s["steps"], "/sweep/steps");
        if (sw.steps < 2) rd.fail("/sweep/steps", "sweep needs at least 2 steps");
        if (!(sw.from < sw.to)) rd.fail("/sweep", "invalid sweep range: need from < to");
        if (!(sw.from > 0)) rd.fail("/sweep/from", "invalid sweep range: values must be positive");
        c.sweep = sw;
    }
    if (doc.contains("wavefunction")) {
        const json& w = doc["wavefunction"];
        rd.only_keys(w, "/wavefunction", {"lower", "upper", "points", "state", "correction"});
        WavefunctionSpec ws;
        for (const char* k : {"lower", "upper", "points"})
            if (!w.contains(k))
                rd.fail(std::string("/wavefunction/") + k, std::string("missing required key '") + k + "'");
        ws.lower = rd.vec(w["lower"], "/wavefunction/lower");
        ws.upper = rd.vec(w["upper"], "/wavefunction/upper");
        ws.points = rd.ivec(w["points"], "/wavefunction/points");
        if (w.contains("state")) ws.state = rd.integer(w["state"], "/wavefunction/state");
        if (w.contains("correction")) ws.correction = rd.boolean(w["correction"], "/wavefunction/correction");
        if (ws.lower.size() != ws.upper.size() || ws.lower.size() != ws.points.size() || ws.lower.empty())
            rd.fail("/wavefunction", "lower, upper and points must have the same nonzero length");
        for (std::size_t i = 0; i < ws.points.size(); ++i) {
            if (ws.points[i] < 1) rd.fail("/wavefunction/points/" + std::to_string(i), "points must be >= 1");
            if (!(ws.lower[i] <= ws.upper[i])) rd.fail("/wavefunction/lower/" + std::to_string(i), "need lower <= upper");
        }
        if (ws.state < 0) rd.fail("/wavefunction/state", "state must be >= 0");
        c.wavefunction = ws;
    }
    try {
        build_model(c);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        rd.fail(validation_path(e.what()), e.what());
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string echo_config(const RunConfig& c) {
    json j = json::object();
    j["family"] = c.family;
    if (!c.centers.empty()) j["centers"] = c.centers;
    if (!c.distance_matrix.empty()) j["distance_matrix"] = c.distance_matrix;
    if (!c.curves.empty()) {
        json cs = json::array();
        for (const auto& s : c.curves) {
            json o;
            o["type"] = s.type;
            if (s.type == "circle") {
                o["center"] = s.center;
                o["radius"] = s.radius;
                o["samples"] = s.samples;
            } else if (s.type == "segment") {
                o["from"] = s.from;
                o["to"] = s.to;
                o["samples"] = s.samples;
            } else {
                o["points"] = s.points;
                o["closed"] = s.closed;
                o["interpolation"] = s.interpolation;
            }
            cs.push_back(o);
        }
        j["curves"] = cs;
    }
    if (!c.couplings_lambda.empty()) j["couplings_lambda"] = c.couplings_lambda;
    if (!c.binding_energies.empty()) j["binding_energies"] = c.binding_energies;
    j["mass_m"] = c.mass_m;
    j["curvature_kappa"] = c.curvature_kappa;
    j["degenerate"] = c.degenerate;
    j["quad_order"] = c.quad_order;
    j["tol"] = c.tol;
    if (c.window) j["window"] = {{"e_min", c.window->e_min}, {"e_max", c.window->e_max}};
    if (c.sweep)
        j["sweep"] = {{"variable", c.sweep->variable}, {"from", c.sweep->from}, {"to", c.sweep->to},
                      {"steps", c.sweep->steps}};
    if (c.wavefunction)
        j["wavefunction"] = {{"lower", c.wavefunction->lower},
                             {"upper", c.wavefunction->upper},
                             {"points", c.wavefunction->points},
                             {"state", c.wavefunction->state},
                             {"correction", c.wavefunction->correction}};
    return j.dump(2) + "\n";
}

}  // namespace krein
