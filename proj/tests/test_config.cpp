#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <parcelfuse/config.hpp>
#include <parcelfuse/errors.hpp>

using namespace parcelfuse;

namespace {

std::filesystem::path write_config(const char* name, const std::string& text) {
    auto dir = std::filesystem::temp_directory_path() / "parcelfuse_cfg";
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    return path;
}

}  // namespace

TEST_CASE("parse_ini splits sections and trims keys and values") {
    std::istringstream in(
        "# leading comment\r\n"
        "\n"
        "[general]\n"
        "  radius =  12.5  \n"
        "name=grid one\n"
        "; another comment\n"
        "[source:osm]\n"
        "path = a.xml\n");
    auto sections = parse_ini(in);
    REQUIRE(sections.size() == 3);
    CHECK(sections[0].name == "");
    CHECK(sections[0].entries.empty());
    CHECK(sections[1].name == "general");
    CHECK(sections[1].line == 3);
    REQUIRE(sections[1].entries.size() == 2);
    CHECK(sections[1].entries[0] == std::pair<std::string, std::string>{"radius", "12.5"});
    CHECK(sections[1].entries[1] == std::pair<std::string, std::string>{"name", "grid one"});
    CHECK(sections[2].name == "source:osm");
    REQUIRE(sections[2].find("path") != nullptr);
    CHECK(*sections[2].find("path") == "a.xml");
    CHECK(sections[2].find("missing") == nullptr);

    // Values may contain '=' characters; only the first one splits.
    std::istringstream eq("[s]\nexpr = a=b\n");
    auto with_eq = parse_ini(eq);
    CHECK(*with_eq[1].find("expr") == "a=b");
}

TEST_CASE("parse_ini rejects malformed lines with positions") {
    std::istringstream bad_header("[general\nk = v\n");
    CHECK_THROWS_WITH_AS(parse_ini(bad_header),
                         "config line 1: unterminated section header", ConfigError);

    std::istringstream no_eq("[general]\njust some words\n");
    CHECK_THROWS_WITH_AS(parse_ini(no_eq), "config line 2: expected 'key = value'",
                         ConfigError);

    std::istringstream empty_key("[general]\n\n = value\n");
    CHECK_THROWS_WITH_AS(parse_ini(empty_key), "config line 3: empty key", ConfigError);
}

TEST_CASE("run config loads and resolves relative paths") {
    auto path = write_config("run_ok.ini",
                             "[general]\n"
                             "footprints = data/fp.geojson\n"
                             "taxonomy = tax.csv\n"
                             "authoritative_crosswalk = /abs/authx.csv\n"
                             "radius = 25\n"
                             "projection = equirectangular\n"
                             "origin_lat = 37.77\n"
                             "origin_lon = -122.42\n"
                             "output_dir = results\n"
                             "id_property = blklot\n"
                             "class_property = use\n"
                             "[source:google]\n"
                             "format = poi_csv\n"
                             "path = google.csv\n"
                             "crosswalk = xw_google.csv\n"
                             "[source:osm]\n"
                             "format = osm_xml\n"
                             "path = osm.xml\n"
                             "crosswalk = xw_osm.csv\n");
    RunConfig cfg = RunConfig::load(path);
    auto base = path.parent_path();
    CHECK(cfg.footprints == base / "data/fp.geojson");
    CHECK(cfg.taxonomy == base / "tax.csv");
    CHECK(cfg.authoritative_crosswalk == std::filesystem::path("/abs/authx.csv"));
    CHECK(cfg.output_dir == base / "results");
    CHECK(cfg.radius == 25.0);
    CHECK(cfg.projection.mode == ProjectionMode::Equirectangular);
    CHECK(cfg.projection.origin_lat == 37.77);
    CHECK(cfg.projection.origin_lon == -122.42);
    CHECK(cfg.geojson.id_property == "blklot");
    CHECK(cfg.geojson.class_property == "use");
    REQUIRE(cfg.sources.size() == 2);
    CHECK(cfg.sources[0].source.name == "google");
    CHECK(cfg.sources[0].format == "poi_csv");
    CHECK(cfg.sources[0].path == base / "google.csv");
    CHECK(cfg.sources[1].source.name == "osm");
    CHECK(cfg.sources[1].crosswalk == base / "xw_osm.csv");
}

TEST_CASE("run config applies defaults") {
    auto path = write_config("run_default.ini",
                             "[general]\n"
                             "footprints = fp.geojson\n"
                             "taxonomy = tax.csv\n"
                             "authoritative_crosswalk = authx.csv\n");
    RunConfig cfg = RunConfig::load(path);
    CHECK(cfg.radius == 10.0);
    CHECK(cfg.projection.mode == ProjectionMode::AlreadyPlanar);
    CHECK(cfg.output_dir == std::filesystem::path("out"));
    CHECK(cfg.geojson.id_property == "mapblklot");
    CHECK(cfg.geojson.class_property == "landuse");
    CHECK(cfg.sources.empty());
}

TEST_CASE("run config rejects unusable inputs") {
    auto check_error = [](const char* name, const std::string& body, const char* what) {
        auto path = write_config(name, body);
        CHECK_THROWS_WITH_AS(RunConfig::load(path), what, ConfigError);
    };

    CHECK_THROWS_AS(RunConfig::load("/nonexistent/dir/run.ini"), ConfigError);

    check_error("run_no_general.ini", "[source:osm]\nformat = osm_xml\npath = a\ncrosswalk = b\n",
                "config: missing [general] section");
    check_error("run_loose.ini", "radius = 3\n[general]\nfootprints = f\ntaxonomy = t\n",
                "config: entries before the first section header");
    check_error("run_no_fp.ini", "[general]\ntaxonomy = t\nauthoritative_crosswalk = a\n",
                "config [general]: missing footprints");
    check_error("run_no_tax.ini", "[general]\nfootprints = f\nauthoritative_crosswalk = a\n",
                "config [general]: missing taxonomy");
    check_error("run_no_ax.ini", "[general]\nfootprints = f\ntaxonomy = t\n",
                "config [general]: missing authoritative_crosswalk");

    const std::string general =
        "[general]\nfootprints = f\ntaxonomy = t\nauthoritative_crosswalk = a\n";
    check_error("run_bad_sec.ini", general + "[sauce:osm]\npath = p\n",
                "config: unknown section 'sauce:osm'");
    check_error("run_anon_src.ini", general + "[source:]\nformat = poi_csv\n",
                "config: section 'source:' has an empty source name");
    check_error("run_bad_fmt.ini",
                general + "[source:osm]\nformat = shapefile\npath = p\ncrosswalk = c\n",
                "config [source:osm]: format must be poi_csv or osm_xml");
    check_error("run_no_path.ini", general + "[source:osm]\nformat = osm_xml\ncrosswalk = c\n",
                "config [source:osm]: missing path");
    check_error("run_no_xw.ini", general + "[source:osm]\nformat = osm_xml\npath = p\n",
                "config [source:osm]: missing crosswalk");
    check_error("run_dup_src.ini",
                general + "[source:osm]\nformat = osm_xml\npath = p\ncrosswalk = c\n" +
                    "[source:osm]\nformat = poi_csv\npath = q\ncrosswalk = d\n",
                "config: duplicate source 'osm'");
    check_error("run_bad_radius.ini",
                "[general]\nfootprints = f\ntaxonomy = t\nauthoritative_crosswalk = a\n"
                "radius = -1\n",
                "config [general] radius: expected a number >= 0");
    check_error("run_bad_proj.ini",
                "[general]\nfootprints = f\ntaxonomy = t\nauthoritative_crosswalk = a\n"
                "projection = mercator\n",
                "config: unknown projection 'mercator'");
    check_error("run_no_origin.ini",
                "[general]\nfootprints = f\ntaxonomy = t\nauthoritative_crosswalk = a\n"
                "projection = equirectangular\n",
                "config: equirectangular projection needs origin_lat/origin_lon");
    check_error("run_bad_origin.ini",
                "[general]\nfootprints = f\ntaxonomy = t\nauthoritative_crosswalk = a\n"
                "projection = equirectangular\norigin_lat = north\norigin_lon = 0\n",
                "config: bad projection origin");
}

TEST_CASE("synth config loads noise models and the palette") {
    auto path = write_config("synth_ok.ini",
                             "[general]\n"
                             "seed = 99\n"
                             "rows = 7\n"
                             "cols = 3\n"
                             "parcel_size = 18\n"
                             "gap = 2.5\n"
                             "class_palette = 5300, 6100 ,6500\n"
                             "taxonomy = tax.csv\n"
                             "authoritative_crosswalk = authx.csv\n"
                             "projection = already_planar\n"
                             "output_dir = synth_out\n"
                             "[source:google]\n"
                             "jitter_sigma = 3\n"
                             "drop_rate = 0.1\n"
                             "confusion_rate = 0.25\n"
                             "crosswalk = xw_google.csv\n"
                             "[source:osm]\n"
                             "crosswalk = xw_osm.csv\n");
    SynthConfig cfg = SynthConfig::load(path);
    auto base = path.parent_path();
    CHECK(cfg.params.seed == 99);
    CHECK(cfg.params.rows == 7);
    CHECK(cfg.params.cols == 3);
    CHECK(cfg.params.parcel_size == 18.0);
    CHECK(cfg.params.gap == 2.5);
    CHECK(cfg.params.class_palette ==
          std::vector<LbcsCode>{{5300}, {6100}, {6500}});
    CHECK(cfg.taxonomy == base / "tax.csv");
    CHECK(cfg.output_dir == base / "synth_out");
    REQUIRE(cfg.params.sources.size() == 2);
    CHECK(cfg.params.sources[0].source.name == "google");
    CHECK(cfg.params.sources[0].jitter_sigma == 3.0);
    CHECK(cfg.params.sources[0].drop_rate == 0.1);
    CHECK(cfg.params.sources[0].confusion_rate == 0.25);
    CHECK(cfg.params.sources[1].jitter_sigma == 0.0);
    CHECK(cfg.params.sources[1].drop_rate == 0.0);
    CHECK(cfg.crosswalks.at("google") == base / "xw_google.csv");
    CHECK(cfg.crosswalks.at("osm") == base / "xw_osm.csv");
}

TEST_CASE("synth config rejects unusable inputs") {
    auto check_error = [](const char* name, const std::string& body, const char* what) {
        auto path = write_config(name, body);
        CHECK_THROWS_WITH_AS(SynthConfig::load(path), what, ConfigError);
    };
    const std::string general =
        "[general]\nclass_palette = 5300\ntaxonomy = t\nauthoritative_crosswalk = a\n";
    const std::string source = "[source:google]\ncrosswalk = c\n";

    check_error("sy_bad_seed.ini",
                "[general]\nseed = soon\nclass_palette = 5300\ntaxonomy = t\n"
                "authoritative_crosswalk = a\n" + source,
                "config [general] seed: expected an unsigned integer");
    check_error("sy_bad_rows.ini",
                "[general]\nrows = 0\nclass_palette = 5300\ntaxonomy = t\n"
                "authoritative_crosswalk = a\n" + source,
                "config [general] rows: expected a positive integer");
    check_error("sy_bad_size.ini",
                "[general]\nparcel_size = 0\nclass_palette = 5300\ntaxonomy = t\n"
                "authoritative_crosswalk = a\n" + source,
                "config [general] parcel_size: must be > 0");
    check_error("sy_bad_code.ini",
                "[general]\nclass_palette = 53a0\ntaxonomy = t\n"
                "authoritative_crosswalk = a\n" + source,
                "config [general] class_palette: bad code '53a0'");
    check_error("sy_no_palette.ini",
                "[general]\ntaxonomy = t\nauthoritative_crosswalk = a\n" + source,
                "config [general]: missing class_palette");
    check_error("sy_no_tax.ini",
                "[general]\nclass_palette = 5300\nauthoritative_crosswalk = a\n" + source,
                "config [general]: missing taxonomy");
    check_error("sy_no_src.ini", general, "config: synth needs at least one [source:...] section");
    check_error("sy_no_xw.ini", general + "[source:google]\njitter_sigma = 1\n",
                "config [source:google]: missing crosswalk");
    check_error("sy_bad_rate.ini", general + "[source:google]\ndrop_rate = 1.5\ncrosswalk = c\n",
                "config [source:google] drop_rate: expected a rate in [0, 1]");
    check_error("sy_bad_sigma.ini",
                general + "[source:google]\njitter_sigma = -2\ncrosswalk = c\n",
                "config [source:google] jitter_sigma: expected a number >= 0");
    check_error("sy_dup_src.ini", general + source + source, "config: duplicate source 'google'");
}
