#include "superl/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "superl/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "field sidecars are written as native little-endian f64");

namespace superl {

using nlohmann::json;

namespace {

json vec2_to_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec2_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("expected a [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_file(const std::filesystem::path& path) {
    try {
        return json::parse(slurp(path));
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

// JSON carries non-finite doubles as null; CSV keeps the literal inf/nan.
json finite_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

std::filesystem::path sidecar_path(const std::filesystem::path& header) {
    std::filesystem::path p = header;
    p.replace_extension(".bin");
    return p;
}

constexpr const char* kArrayNames[5] = {"u", "psi_re1", "psi_im1", "psi_re2",
                                        "psi_im2"};

const std::vector<double>& field_array(const ScalarField& u, const SpinorField& psi,
                                       int k) {
    return k == 0 ? u.values() : psi.comp(k - 1);
}

}  // namespace

json domain_to_json(const Domain& d) {
    json j;
    switch (d.kind()) {
        case Domain::Kind::Disk:
            j["kind"] = "disk";
            j["center"] = vec2_to_json(d.center());
            j["radius"] = d.outer_radius();
            break;
        case Domain::Kind::Annulus:
            j["kind"] = "annulus";
            j["center"] = vec2_to_json(d.center());
            j["r_inner"] = d.inner_radius();
            j["r_outer"] = d.outer_radius();
            break;
        case Domain::Kind::Rectangle:
            j["kind"] = "rectangle";
            j["lo"] = vec2_to_json(d.lo());
            j["hi"] = vec2_to_json(d.hi());
            break;
    }
    return j;
}

Domain domain_from_json(const json& j) {
    try {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "disk")
            return Domain::disk(vec2_from_json(j.at("center")),
                                j.at("radius").get<double>());
        if (kind == "annulus")
            return Domain::annulus(vec2_from_json(j.at("center")),
                                   j.at("r_inner").get<double>(),
                                   j.at("r_outer").get<double>());
        if (kind == "rectangle")
            return Domain::rectangle(vec2_from_json(j.at("lo")),
                                     vec2_from_json(j.at("hi")));
        throw ConfigError("unknown domain kind: " + kind);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad domain: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad domain: ") + e.what());
    }
}

void write_fields(const std::filesystem::path& path, const ScalarField& u,
                  const SpinorField& psi) {
    const Grid& g = *u.grid();
    if (!u.grid()->same_lattice(*psi.grid()))
        throw std::invalid_argument("fields live on different grids");
    const std::size_t count = g.size();
    std::filesystem::path bin = sidecar_path(path);

    json header;
    header["format"] = "superl-fields";
    header["version"] = 1;
    header["grid"] = {{"domain", domain_to_json(g.domain())},
                      {"h", g.h()},
                      {"nx", g.nx()},
                      {"ny", g.ny()}};
    header["vanished_u"] = u.is_vanished();
    header["binary"] = bin.filename().string();
    json arrays = json::array();
    for (int k = 0; k < 5; ++k)
        arrays.push_back({{"name", kArrayNames[k]},
                          {"offset", static_cast<std::uint64_t>(k) * count * 8},
                          {"count", count}});
    header["arrays"] = arrays;

    std::ofstream hout(path, std::ios::binary | std::ios::trunc);
    if (!hout) throw ComputeError("cannot write " + path.string());
    hout << header.dump(2) << "\n";

    std::ofstream bout(bin, std::ios::binary | std::ios::trunc);
    if (!bout) throw ComputeError("cannot write " + bin.string());
    for (int k = 0; k < 5; ++k) {
        const auto& v = field_array(u, psi, k);
        bout.write(reinterpret_cast<const char*>(v.data()),
                   static_cast<std::streamsize>(v.size() * sizeof(double)));
    }
    if (!bout) throw ComputeError("short write to " + bin.string());
}

std::pair<ScalarField, SpinorField> read_fields(const std::filesystem::path& path) {
    json header = parse_json_file(path);
    try {
        if (header.at("format").get<std::string>() != "superl-fields")
            throw ConfigError(path.string() + ": not a field file");
        const json& jg = header.at("grid");
        GridPtr g = make_grid(domain_from_json(jg.at("domain")),
                              jg.at("h").get<double>());
        if (g->nx() != jg.at("nx").get<int>() || g->ny() != jg.at("ny").get<int>())
            throw ComputeError(path.string() + ": grid shape mismatch");
        const std::size_t count = g->size();

        std::filesystem::path bin =
            path.parent_path() / header.at("binary").get<std::string>();
        std::string bytes = slurp(bin);
        if (bytes.size() != 5 * count * sizeof(double))
            throw ComputeError(bin.string() + ": sidecar size mismatch");

        ScalarField u = header.at("vanished_u").get<bool>() ? ScalarField::vanished(g)
                                                            : ScalarField(g);
        SpinorField psi(g);
        for (int k = 0; k < 5; ++k) {
            auto& dst = k == 0 ? u.values() : psi.comp(k - 1);
            std::memcpy(dst.data(), bytes.data() + k * count * sizeof(double),
                        count * sizeof(double));
        }
        return {std::move(u), std::move(psi)};
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

json family_spec_to_json(const FamilySpec& spec) {
    json j;
    json bubbles = json::array();
    for (const auto& b : spec.bubbles) {
        json jb;
        switch (b.kind) {
            case BubbleKind::Liouville: jb["kind"] = "liouville"; break;
            case BubbleKind::Conical: jb["kind"] = "conical"; break;
            case BubbleKind::Yamabe: jb["kind"] = "yamabe"; break;
        }
        jb["lambda0"] = b.lambda0;
        jb["growth"] = b.growth;
        jb["center"] = vec2_to_json(b.center);
        if (b.kind == BubbleKind::Conical) jb["beta"] = b.beta;
        if (b.kind == BubbleKind::Yamabe) {
            jb["mu"] = b.mu;
            if (b.sign != 0) jb["sign"] = b.sign;
        }
        bubbles.push_back(jb);
    }
    j["bubbles"] = bubbles;
    if (spec.background)
        j["background"] = {{"level0", spec.background->level0},
                           {"drift", spec.background->drift}};
    j["domain"] = domain_to_json(spec.domain);
    j["h"] = spec.h;
    j["n_range"] = json::array({spec.n_min, spec.n_max});
    return j;
}

FamilySpec family_spec_from_json(const json& j) {
    try {
        FamilySpec spec;
        for (const json& jb : j.at("bubbles")) {
            BubbleTemplate b;
            std::string kind = jb.at("kind").get<std::string>();
            if (kind == "liouville")
                b.kind = BubbleKind::Liouville;
            else if (kind == "conical")
                b.kind = BubbleKind::Conical;
            else if (kind == "yamabe")
                b.kind = BubbleKind::Yamabe;
            else
                throw ConfigError("unknown bubble kind: " + kind);
            b.lambda0 = jb.at("lambda0").get<double>();
            b.growth = jb.at("growth").get<double>();
            b.center = vec2_from_json(jb.at("center"));
            if (jb.contains("beta")) b.beta = jb.at("beta").get<double>();
            if (jb.contains("mu")) b.mu = jb.at("mu").get<double>();
            if (jb.contains("sign")) b.sign = jb.at("sign").get<int>();
            spec.bubbles.push_back(b);
        }
        if (j.contains("background"))
            spec.background = Background{j.at("background").at("level0").get<double>(),
                                         j.at("background").at("drift").get<double>()};
        spec.domain = domain_from_json(j.at("domain"));
        spec.h = j.at("h").get<double>();
        const json& nr = j.at("n_range");
        if (!nr.is_array() || nr.size() != 2)
            throw ConfigError("n_range must be [n_min, n_max]");
        spec.n_min = nr[0].get<int>();
        spec.n_max = nr[1].get<int>();
        spec.validate();
        return spec;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad family spec: ") + e.what());
    }
}

FamilySpec load_family_spec(const std::filesystem::path& path) {
    return family_spec_from_json(parse_json_file(path));
}

json to_json(const SolveReport& r) {
    return {{"iterations", r.iterations},
            {"converged", r.converged},
            {"residual_history", r.residual_history},
            {"final_residual_u", finite_or_null(r.final_residual_u)},
            {"final_residual_psi", finite_or_null(r.final_residual_psi)}};
}

json to_json(const AuditReport& r) {
    json rows = json::array();
    for (const AuditRow& row : r.rows)
        rows.push_back({{"n", row.n},
                        {"total_e2u", row.total_e2u},
                        {"total_psi4", row.total_psi4},
                        {"account_e2u", row.account_e2u},
                        {"account_psi4", row.account_psi4},
                        {"defect_e2u", row.defect_e2u},
                        {"defect_psi4", row.defect_psi4},
                        {"tail_e2u", row.tail_e2u},
                        {"tail_psi4", row.tail_psi4},
                        {"neck_sup", row.neck_sup},
                        {"local_mass", row.local_mass},
                        {"cross_term", row.cross_term}});
    return {{"label", r.label},
            {"census",
             {{"super_liouville", r.census_liouville}, {"yamabe", r.census_yamabe}}},
            {"rows", rows}};
}

json to_json(const QuantizationAudit& r) {
    return {{"deltas", r.deltas},
            {"masses", r.masses},
            {"limit", r.limit},
            {"verdict", r.verdict}};
}

json to_json(const BMClassification& r) {
    const char* label = r.label == BMClassification::Case::A   ? "a"
                        : r.label == BMClassification::Case::B ? "b"
                                                               : "c";
    json sigma = json::array();
    for (Vec2 p : r.sigma) sigma.push_back(vec2_to_json(p));
    json off = json::array();
    for (double v : r.off_sigma_max) off.push_back(finite_or_null(v));
    return {{"label", label},
            {"sigma", sigma},
            {"point_energies", r.point_energies},
            {"off_sigma_max", off},
            {"off_sigma_diverges", r.off_sigma_diverges}};
}

json to_json(const SingularityReport& r) {
    json an = json::array();
    for (double v : r.a_n) an.push_back(finite_or_null(v));
    return {{"a_n", an}, {"first_type", r.first_type}, {"threshold", r.threshold}};
}

json to_json(const FamilyReport& r) {
    json rows = json::array();
    for (const FamilyReportRow& row : r.rows)
        rows.push_back({{"index", row.index},
                        {"mass", row.mass},
                        {"pohozaev", row.pohozaev},
                        {"neck_sup", row.neck_sup},
                        {"a_n", finite_or_null(row.a_n)},
                        {"label", row.label}});
    return {{"rows", rows}, {"bm", to_json(r.bm)}, {"singularity", to_json(r.singularity)}};
}

std::string audit_csv(const AuditReport& r) {
    std::string out = "n,mass,neck_sup,defect_psi4,defect_e2u,label\n";
    for (const AuditRow& row : r.rows) {
        out += std::to_string(row.n);
        out += ',';
        out += format_double(row.local_mass);
        out += ',';
        out += format_double(row.neck_sup);
        out += ',';
        out += format_double(row.defect_psi4);
        out += ',';
        out += format_double(row.defect_e2u);
        out += ',';
        out += r.label;
        out += '\n';
    }
    return out;
}

std::string report_csv(const FamilyReport& r) {
    std::string out = "index,mass,pohozaev,neck_sup,a_n,label\n";
    for (const FamilyReportRow& row : r.rows) {
        out += std::to_string(row.index);
        out += ',';
        out += format_double(row.mass);
        out += ',';
        out += format_double(row.pohozaev);
        out += ',';
        out += format_double(row.neck_sup);
        out += ',';
        out += format_double(row.a_n);
        out += ',';
        out += row.label;
        out += '\n';
    }
    return out;
}

std::map<std::string, std::string> parse_config(const std::string& text) {
    std::map<std::string, std::string> cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        auto a = s.find_first_not_of(" \t\r");
        auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        cfg[key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

std::map<std::string, std::string> load_config(const std::filesystem::path& path) {
    return parse_config(slurp(path));
}

std::uint64_t config_hash(const std::map<std::string, std::string>& config) {
    std::uint64_t h = 14695981039346656037ull;
    auto eat = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [k, v] : config) {
        eat(k);
        eat("=");
        eat(v);
        eat("\n");
    }
    return h;
}

json make_manifest(const std::map<std::string, std::string>& config,
                   const Grid* grid) {
    char hex[19];
    std::snprintf(hex, sizeof hex, "0x%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    json j;
    j["config"] = config;
    j["config_hash"] = hex;
    j["tool_version"] = kToolVersion;
    if (grid)
        j["grid"] = {{"domain", domain_to_json(grid->domain())},
                     {"h", grid->h()},
                     {"nx", grid->nx()},
                     {"ny", grid->ny()}};
    else
        j["grid"] = nullptr;
    return j;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf;
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), p);
}

}  // namespace superl
