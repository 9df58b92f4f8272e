#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "trl/csv.hpp"

using namespace trl;
namespace fs = std::filesystem;

namespace {

const char* cli() { return TRLKIT_BIN; }

int run(const std::string& args) {
    const std::string cmd = std::string(cli()) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("trl_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("simulate writes a loadable bundle") {
    const fs::path dir = fresh_dir("simulate");
    REQUIRE(run("simulate --seed 3 --groups 5 --per-group 2 --out " + dir.string()) == 0);
    for (const char* name : {"activity.csv", "outages.csv", "road_events.csv", "hazard_path.csv",
                             "attributes.csv", "manifest.json", "boundaries.geojson", "run.json"})
        CHECK(fs::exists(dir / name));
    CHECK(slurp(dir / "run.json").find("\"command\": \"simulate\"") != std::string::npos);
    CHECK(slurp(dir / "run.json").find("\"seed\": 3") != std::string::npos);
}

TEST_CASE("quantify then fit then report") {
    const fs::path data = fresh_dir("pipe_data");
    REQUIRE(run("simulate --seed 11 --groups 8 --per-group 3 --out " + data.string()) == 0);
    const std::string manifest = (data / "manifest.json").string();

    const fs::path q = fresh_dir("pipe_q");
    REQUIRE(run("quantify --manifest " + manifest + " --out " + q.string()) == 0);
    const auto regions = parse_csv(slurp(q / "regions.csv"), "regions");
    CHECK(regions.header ==
          std::vector<std::string>{"polygon_id", "name", "county", "trl", "resilience",
                                   "pct_loss", "trl_2dp", "pct_loss_2dp"});
    REQUIRE(!regions.rows.empty());
    // Sorted by loss, heaviest first.
    double prev = 1e300;
    for (const auto& row : regions.rows) {
        const double trl = parse_double(row[3], "trl");
        CHECK(trl <= prev);
        prev = trl;
        const double res = parse_double(row[4], "resilience");
        const double pct = parse_double(row[5], "pct");
        CHECK(res == doctest::Approx(37.0 - trl).epsilon(1e-12));
        CHECK(pct == doctest::Approx(100.0 * trl / 37.0).epsilon(1e-12));
    }
    CHECK(slurp(q / "selection.json").find("\"rate_floor\": 0.9") != std::string::npos);

    const fs::path f = fresh_dir("pipe_f");
    REQUIRE(run("fit --manifest " + manifest + " --out " + f.string()) == 0);
    const auto cov = parse_csv(slurp(f / "covariates.csv"), "covariates");
    CHECK(cov.header ==
          std::vector<std::string>{"polygon_id", "county", "trl", "road_hours", "restore_days",
                                   "damage", "pct_pre2000", "dist_km", "income", "pct_black",
                                   "pct_hispanic"});
    CHECK(cov.rows.size() == regions.rows.size());
    const std::string model = slurp(f / "model.json");
    CHECK(model.find("\"(Intercept)\"") != std::string::npos);
    CHECK(model.find("\"family\": \"gamma\"") != std::string::npos);
    CHECK(model.find("\"n_groups\": 8") != std::string::npos);

    const fs::path r = fresh_dir("pipe_r");
    REQUIRE(run("report --manifest " + manifest + " --boundaries " +
                (data / "boundaries.geojson").string() + " --out " + r.string()) == 0);
    CHECK(fs::exists(r / "histogram.csv"));
    CHECK(fs::exists(r / "curves.csv"));
    CHECK(fs::exists(r / "choropleth.geojson"));
    const auto hist = parse_csv(slurp(r / "histogram.csv"), "hist");
    std::int64_t total = 0;
    for (const auto& row : hist.rows) total += parse_int(row[2], "count");
    CHECK(total == static_cast<std::int64_t>(regions.rows.size()));

    // Curves cover each selected region across the whole horizon.
    const auto curves = parse_csv(slurp(r / "curves.csv"), "curves");
    CHECK(curves.rows.size() == regions.rows.size() * 37);

    // Without the boundaries flag no geojson appears.
    const fs::path r2 = fresh_dir("pipe_r2");
    REQUIRE(run("report --manifest " + manifest + " --out " + r2.string()) == 0);
    CHECK(!fs::exists(r2 / "choropleth.geojson"));
}

TEST_CASE("run-all bundles every artifact and reruns byte-identically") {
    const fs::path data = fresh_dir("all_data");
    REQUIRE(run("simulate --seed 19 --groups 6 --per-group 2 --out " + data.string()) == 0);
    const std::string manifest = (data / "manifest.json").string();
    const std::string boundaries = (data / "boundaries.geojson").string();

    // Rerun into the same path: run.json records the output directory, so a
    // byte-level comparison needs identical invocations, not just inputs.
    const fs::path a = fresh_dir("all_a");
    const char* names[] = {"regions.csv", "selection.json", "covariates.csv", "model.json",
                           "histogram.csv", "curves.csv", "choropleth.geojson", "run.json"};
    REQUIRE(run("run-all --manifest " + manifest + " --boundaries " + boundaries + " --out " +
                a.string()) == 0);
    std::map<std::string, std::string> first;
    for (const char* name : names) {
        REQUIRE(fs::exists(a / name));
        first[name] = slurp(a / name);
    }
    fs::remove_all(a);
    REQUIRE(run("run-all --manifest " + manifest + " --boundaries " + boundaries + " --out " +
                a.string()) == 0);
    for (const char* name : names) CHECK(slurp(a / name) == first[name]);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run("") == 2);
    CHECK(run("bogus") == 2);
    CHECK(run("quantify") == 2);             // --manifest is required
    CHECK(run("quantify --manifest") == 2);  // flag without value
}

TEST_CASE("load errors exit 3") {
    CHECK(run("quantify --manifest /nonexistent/m.json --out /tmp/trl_cli_x") == 3);

    const fs::path dir = fresh_dir("badjson");
    std::ofstream(dir / "manifest.json") << "{ not json";
    CHECK(run("quantify --manifest " + (dir / "manifest.json").string() + " --out " +
              dir.string()) == 3);
}

TEST_CASE("validation errors exit 4") {
    const fs::path data = fresh_dir("val_data");
    REQUIRE(run("simulate --seed 23 --groups 5 --per-group 2 --out " + data.string()) == 0);
    // A drop window outside the horizon is a data/parameter problem.
    CHECK(run("quantify --manifest " + (data / "manifest.json").string() +
              " --landfall 2022-01-01 --out " + fresh_dir("val_out").string()) == 4);
}

TEST_CASE("empty selection still succeeds") {
    const fs::path data = fresh_dir("empty_data");
    REQUIRE(run("simulate --seed 29 --groups 5 --per-group 2 --out " + data.string()) == 0);
    const fs::path out = fresh_dir("empty_out");
    // Impossible thresholds: nothing qualifies.
    REQUIRE(run("quantify --manifest " + (data / "manifest.json").string() +
                " --rate-floor 0 --z-days 99 --out " + out.string()) == 0);
    const auto regions = parse_csv(slurp(out / "regions.csv"), "regions");
    CHECK(regions.rows.empty());
    CHECK(slurp(out / "run.json").find("no regions met the selection thresholds") !=
          std::string::npos);
}
