#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "superl/errors.hpp"
#include "superl/io.hpp"
#include "testutil.hpp"

using namespace superl;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("field files round-trip bit for bit") {
    fs::path dir = scratch_dir("superl_io_fields");
    GridPtr g = make_grid(Domain::disk({0.1, -0.2}, 0.5), 1.0 / 16.0);
    testutil::SmoothState st = testutil::random_state(g, 7101);

    fs::path path = dir / "state.json";
    write_fields(path, st.u, st.psi);
    CHECK(fs::file_size(dir / "state.bin") == 5 * g->size() * sizeof(double));

    auto [u, psi] = read_fields(path);
    CHECK(u.grid()->same_lattice(*g));
    CHECK_FALSE(u.is_vanished());
    for (std::size_t i = 0; i < g->size(); ++i) {
        CHECK(u[i] == st.u[i]);
        for (int k = 0; k < 4; ++k) CHECK(psi.comp(k)[i] == st.psi.comp(k)[i]);
    }

    CHECK_THROWS_AS(read_fields(dir / "missing.json"), ConfigError);
    GridPtr g2 = make_grid(Domain::disk({0, 0}, 0.5), 1.0 / 10.0);
    CHECK_THROWS_AS(write_fields(dir / "bad.json", st.u, SpinorField(g2)),
                    std::invalid_argument);
}

TEST_CASE("the vanished flag survives the round trip") {
    fs::path dir = scratch_dir("superl_io_vanished");
    GridPtr g = make_grid(Domain::disk({0, 0}, 0.5), 1.0 / 10.0);
    write_fields(dir / "v.json", ScalarField::vanished(g), SpinorField(g));
    auto [u, psi] = read_fields(dir / "v.json");
    CHECK(u.is_vanished());
    CHECK(u.exp_u(0) == 0.0);
}

TEST_CASE("family specs round-trip through JSON") {
    FamilySpec spec;
    BubbleTemplate outer;
    outer.kind = BubbleKind::Conical;
    outer.lambda0 = 2.0;
    outer.growth = 2.0;
    outer.beta = 0.5;
    spec.bubbles.push_back(outer);
    BubbleTemplate inner;
    inner.kind = BubbleKind::Yamabe;
    inner.lambda0 = 8.0;
    inner.growth = 3.0;
    inner.mu = -0.25;
    inner.sign = 1;
    inner.center = {0.25, 0.0};
    spec.bubbles.push_back(inner);
    spec.h = 1.0 / 96.0;
    spec.n_min = 1;
    spec.n_max = 4;

    FamilySpec back = family_spec_from_json(family_spec_to_json(spec));
    REQUIRE(back.bubbles.size() == 2);
    CHECK(back.bubbles[0].kind == BubbleKind::Conical);
    CHECK(back.bubbles[0].beta == 0.5);
    CHECK(back.bubbles[1].kind == BubbleKind::Yamabe);
    CHECK(back.bubbles[1].mu == -0.25);
    CHECK(back.bubbles[1].sign == 1);
    CHECK(back.bubbles[1].center.x == 0.25);
    CHECK(back.h == spec.h);
    CHECK(back.n_min == 1);
    CHECK(back.n_max == 4);
    CHECK(back.domain.kind() == Domain::Kind::Disk);
    CHECK_FALSE(back.background.has_value());

    FamilySpec bg;
    bg.background = Background{0.5, 0.125};
    FamilySpec bg2 = family_spec_from_json(family_spec_to_json(bg));
    REQUIRE(bg2.background.has_value());
    CHECK(bg2.background->level0 == 0.5);
    CHECK(bg2.background->drift == 0.125);
}

TEST_CASE("loading family specs rejects garbage and bad layouts") {
    fs::path dir = scratch_dir("superl_io_spec");
    {
        std::ofstream out(dir / "spec.json");
        out << family_spec_to_json(FamilySpec{}).dump(2);
    }
    CHECK_NOTHROW(load_family_spec(dir / "spec.json"));

    {
        std::ofstream out(dir / "broken.json");
        out << "this is not json";
    }
    CHECK_THROWS_AS(load_family_spec(dir / "broken.json"), ConfigError);
    CHECK_THROWS_AS(load_family_spec(dir / "absent.json"), ConfigError);

    nlohmann::json j = family_spec_to_json(FamilySpec{});
    j.erase("h");
    CHECK_THROWS_AS(family_spec_from_json(j), ConfigError);

    // structurally valid JSON, unsupported layout: validation runs on load
    FamilySpec two;
    BubbleTemplate b;
    two.bubbles = {b, b};
    CHECK_THROWS_AS(family_spec_from_json(family_spec_to_json(two)), ConfigError);
}

TEST_CASE("config parsing: comments, blanks, later assignments win") {
    auto cfg = parse_config(
        "# header comment\n"
        "case = liouville\n"
        "\n"
        "lambda=2.5   # trailing comment\n"
        "lambda = 4\n"
        "  out = runs/a.json  \n");
    CHECK(cfg.size() == 3);
    CHECK(cfg.at("case") == "liouville");
    CHECK(cfg.at("lambda") == "4");
    CHECK(cfg.at("out") == "runs/a.json");

    CHECK_THROWS_AS(parse_config("lambda\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("= orphan value\n"), ConfigError);

    fs::path dir = scratch_dir("superl_io_cfg");
    {
        std::ofstream out(dir / "run.cfg");
        out << "h = 0.25\n";
    }
    CHECK(load_config(dir / "run.cfg").at("h") == "0.25");
    CHECK_THROWS_AS(load_config(dir / "none.cfg"), ConfigError);
}

TEST_CASE("config hash is order-independent and value-sensitive") {
    std::map<std::string, std::string> a{{"x", "1"}, {"y", "2"}};
    std::map<std::string, std::string> b;
    b["y"] = "2";
    b["x"] = "1";
    CHECK(config_hash(a) == config_hash(b));
    b["x"] = "10";
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash({}) == 14695981039346656037ull);  // FNV-1a offset basis
}

TEST_CASE("manifests are deterministic and carry no clock") {
    std::map<std::string, std::string> cfg{{"case", "yamabe"}, {"lambda", "4"}};
    GridPtr g = make_grid(Domain::disk({0, 0}, 1.0), 0.125);
    nlohmann::json m1 = make_manifest(cfg, g.get());
    nlohmann::json m2 = make_manifest(cfg, g.get());
    CHECK(m1.dump() == m2.dump());
    CHECK(m1.at("tool_version") == kToolVersion);
    CHECK(m1.at("config").at("lambda") == "4");
    CHECK(m1.at("config_hash").get<std::string>().rfind("0x", 0) == 0);
    CHECK(m1.at("grid").at("nx") == g->nx());
    for (const auto& [key, value] : m1.items()) {
        CHECK(key.find("time") == std::string::npos);
        CHECK(key.find("date") == std::string::npos);
    }
    CHECK(make_manifest(cfg, nullptr).at("grid").is_null());
}

TEST_CASE("format_double renders shortest round-trip decimals") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(-0.125) == "-0.125");
    for (double v : {1.0 / 3.0, 12.5651, 1e-300, 6.283185307179586}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("CSV tables carry the fixed headers and rendered rows") {
    AuditReport audit;
    audit.label = "super-liouville";
    AuditRow row;
    row.n = 0;
    row.local_mass = 1.5;
    row.neck_sup = 0.25;
    row.defect_psi4 = -0.125;
    row.defect_e2u = 2.0;
    audit.rows.push_back(row);
    CHECK(audit_csv(audit) ==
          "n,mass,neck_sup,defect_psi4,defect_e2u,label\n"
          "0,1.5,0.25,-0.125,2,super-liouville\n");

    FamilyReport rep;
    FamilyReportRow r;
    r.index = 3;
    r.mass = 2.0;
    r.pohozaev = 0.5;
    r.neck_sup = 0.25;
    r.a_n = -std::numeric_limits<double>::infinity();
    r.label = "second";
    rep.rows.push_back(r);
    CHECK(report_csv(rep) ==
          "index,mass,pohozaev,neck_sup,a_n,label\n"
          "3,2,0.5,0.25,-inf,second\n");
}

TEST_CASE("report JSON maps non-finite values to null") {
    SolveReport sr;
    sr.iterations = 4;
    sr.converged = true;
    sr.residual_history = {1.0, 0.1};
    sr.final_residual_u = std::numeric_limits<double>::quiet_NaN();
    sr.final_residual_psi = 1e-12;
    nlohmann::json j = to_json(sr);
    CHECK(j.at("iterations") == 4);
    CHECK(j.at("converged") == true);
    CHECK(j.at("residual_history").size() == 2);
    CHECK(j.at("final_residual_u").is_null());
    CHECK(j.at("final_residual_psi") == 1e-12);

    BMClassification bm;
    bm.label = BMClassification::Case::C;
    bm.sigma = {{0.0, 0.0}};
    bm.off_sigma_max = {-std::numeric_limits<double>::infinity(), -1.0};
    nlohmann::json jb = to_json(bm);
    CHECK(jb.at("label") == "c");
    CHECK(jb.at("sigma").size() == 1);
    CHECK(jb.at("off_sigma_max")[0].is_null());
    CHECK(jb.at("off_sigma_max")[1] == -1.0);
}

}  // TEST_SUITE
