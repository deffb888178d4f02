#include "parcelfuse/config.hpp"

#include <fstream>
#include <set>

#include "parcelfuse/errors.hpp"
#include "parcelfuse/strings.hpp"

namespace parcelfuse {

const std::string* IniSection::find(std::string_view key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return &v;
    return nullptr;
}

std::vector<IniSection> parse_ini(std::istream& in) {
    std::vector<IniSection> sections;
    sections.push_back({"", {}, 0});
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string_view line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": unterminated section header");
            sections.push_back(
                {std::string(trim(line.substr(1, line.size() - 2))), {}, line_no});
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        sections.back().entries.emplace_back(key, value);
    }
    return sections;
}

namespace {

std::vector<IniSection> load_ini_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    return parse_ini(in);
}

double require_rate(const IniSection& sec, const std::string& key, double fallback) {
    const std::string* raw = sec.find(key);
    if (!raw) return fallback;
    const auto v = parse_finite_double(*raw);
    if (!v || *v < 0.0 || *v > 1.0)
        throw ConfigError("config [" + sec.name + "] " + key + ": expected a rate in [0, 1]");
    return *v;
}

double require_nonneg(const IniSection& sec, const std::string& key, double fallback) {
    const std::string* raw = sec.find(key);
    if (!raw) return fallback;
    const auto v = parse_finite_double(*raw);
    if (!v || *v < 0.0)
        throw ConfigError("config [" + sec.name + "] " + key + ": expected a number >= 0");
    return *v;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    const std::filesystem::path p(value);
    return p.is_absolute() ? p : base / p;
}

ProjectionSpec parse_projection(const IniSection& sec) {
    ProjectionSpec proj;
    if (const std::string* mode = sec.find("projection")) {
        const std::string m = ascii_lower(trim(*mode));
        if (m == "already_planar") proj.mode = ProjectionMode::AlreadyPlanar;
        else if (m == "equirectangular") proj.mode = ProjectionMode::Equirectangular;
        else throw ConfigError("config: unknown projection '" + *mode + "'");
    }
    if (proj.mode == ProjectionMode::Equirectangular) {
        const std::string* lat = sec.find("origin_lat");
        const std::string* lon = sec.find("origin_lon");
        if (!lat || !lon)
            throw ConfigError("config: equirectangular projection needs origin_lat/origin_lon");
        const auto plat = parse_finite_double(*lat);
        const auto plon = parse_finite_double(*lon);
        if (!plat || !plon) throw ConfigError("config: bad projection origin");
        proj.origin_lat = *plat;
        proj.origin_lon = *plon;
        proj.validate();
    }
    return proj;
}

constexpr std::string_view kSourcePrefix = "source:";

}  // namespace

RunConfig RunConfig::load(const std::filesystem::path& path) {
    const auto sections = load_ini_file(path);
    const std::filesystem::path base = path.has_parent_path()
                                           ? path.parent_path()
                                           : std::filesystem::path(".");

    RunConfig cfg;
    std::set<std::string> seen_sources;
    bool have_general = false;
    for (const auto& sec : sections) {
        if (sec.name.empty()) {
            if (!sec.entries.empty())
                throw ConfigError("config: entries before the first section header");
            continue;
        }
        if (sec.name == "general") {
            have_general = true;
            const std::string* fp = sec.find("footprints");
            const std::string* tax = sec.find("taxonomy");
            const std::string* ax = sec.find("authoritative_crosswalk");
            if (!fp || trim(*fp).empty())
                throw ConfigError("config [general]: missing footprints");
            if (!tax || trim(*tax).empty())
                throw ConfigError("config [general]: missing taxonomy");
            if (!ax || trim(*ax).empty())
                throw ConfigError("config [general]: missing authoritative_crosswalk");
            cfg.footprints = resolve(base, *fp);
            cfg.taxonomy = resolve(base, *tax);
            cfg.authoritative_crosswalk = resolve(base, *ax);
            if (const std::string* v = sec.find("id_property")) cfg.geojson.id_property = *v;
            if (const std::string* v = sec.find("class_property"))
                cfg.geojson.class_property = *v;
            cfg.radius = require_nonneg(sec, "radius", cfg.radius);
            if (const std::string* v = sec.find("output_dir"); v && !trim(*v).empty())
                cfg.output_dir = resolve(base, *v);
            cfg.projection = parse_projection(sec);
        } else if (sec.name.rfind(kSourcePrefix, 0) == 0) {
            SourceConfig src;
            src.source = Source::parse(sec.name.substr(kSourcePrefix.size()));
            if (src.source.name.empty())
                throw ConfigError("config: section '" + sec.name + "' has an empty source name");
            if (!seen_sources.insert(src.source.name).second)
                throw ConfigError("config: duplicate source '" + src.source.name + "'");
            const std::string* format = sec.find("format");
            const std::string* p = sec.find("path");
            const std::string* xw = sec.find("crosswalk");
            if (!format || (*format != "poi_csv" && *format != "osm_xml"))
                throw ConfigError("config [" + sec.name +
                                  "]: format must be poi_csv or osm_xml");
            if (!p || trim(*p).empty())
                throw ConfigError("config [" + sec.name + "]: missing path");
            if (!xw || trim(*xw).empty())
                throw ConfigError("config [" + sec.name + "]: missing crosswalk");
            src.format = *format;
            src.path = resolve(base, *p);
            src.crosswalk = resolve(base, *xw);
            cfg.sources.push_back(std::move(src));
        } else {
            throw ConfigError("config: unknown section '" + sec.name + "'");
        }
    }
    if (!have_general) throw ConfigError("config: missing [general] section");
    return cfg;
}

SynthConfig SynthConfig::load(const std::filesystem::path& path) {
    const auto sections = load_ini_file(path);
    const std::filesystem::path base = path.has_parent_path()
                                           ? path.parent_path()
                                           : std::filesystem::path(".");

    SynthConfig cfg;
    bool have_general = false;
    for (const auto& sec : sections) {
        if (sec.name.empty()) {
            if (!sec.entries.empty())
                throw ConfigError("config: entries before the first section header");
            continue;
        }
        if (sec.name == "general") {
            have_general = true;
            if (const std::string* v = sec.find("seed")) {
                try {
                    cfg.params.seed = std::stoull(std::string(trim(*v)));
                } catch (...) {
                    throw ConfigError("config [general] seed: expected an unsigned integer");
                }
            }
            auto parse_count = [&](const char* key, std::size_t fallback) {
                const std::string* v = sec.find(key);
                if (!v) return fallback;
                try {
                    const long long n = std::stoll(std::string(trim(*v)));
                    if (n < 1) throw std::invalid_argument("");
                    return static_cast<std::size_t>(n);
                } catch (...) {
                    throw ConfigError(std::string("config [general] ") + key +
                                      ": expected a positive integer");
                }
            };
            cfg.params.rows = parse_count("rows", cfg.params.rows);
            cfg.params.cols = parse_count("cols", cfg.params.cols);
            cfg.params.parcel_size = require_nonneg(sec, "parcel_size", cfg.params.parcel_size);
            cfg.params.gap = require_nonneg(sec, "gap", cfg.params.gap);
            if (cfg.params.parcel_size <= 0.0)
                throw ConfigError("config [general] parcel_size: must be > 0");
            if (const std::string* v = sec.find("class_palette")) {
                std::string_view rest = *v;
                while (!rest.empty()) {
                    const std::size_t comma = rest.find(',');
                    const std::string_view item = trim(rest.substr(0, comma));
                    if (!item.empty()) {
                        int code = 0;
                        for (const char c : item) {
                            if (c < '0' || c > '9')
                                throw ConfigError("config [general] class_palette: bad code '" +
                                                  std::string(item) + "'");
                            code = code * 10 + (c - '0');
                        }
                        cfg.params.class_palette.push_back(LbcsCode{code});
                    }
                    if (comma == std::string_view::npos) break;
                    rest.remove_prefix(comma + 1);
                }
            }
            if (cfg.params.class_palette.empty())
                throw ConfigError("config [general]: missing class_palette");
            const std::string* tax = sec.find("taxonomy");
            const std::string* ax = sec.find("authoritative_crosswalk");
            if (!tax || trim(*tax).empty())
                throw ConfigError("config [general]: missing taxonomy");
            if (!ax || trim(*ax).empty())
                throw ConfigError("config [general]: missing authoritative_crosswalk");
            cfg.taxonomy = resolve(base, *tax);
            cfg.authoritative_crosswalk = resolve(base, *ax);
            if (const std::string* v = sec.find("output_dir"); v && !trim(*v).empty())
                cfg.output_dir = resolve(base, *v);
            cfg.params.projection = parse_projection(sec);
        } else if (sec.name.rfind(kSourcePrefix, 0) == 0) {
            SourceNoise noise;
            noise.source = Source::parse(sec.name.substr(kSourcePrefix.size()));
            if (noise.source.name.empty())
                throw ConfigError("config: section '" + sec.name + "' has an empty source name");
            for (const auto& existing : cfg.params.sources)
                if (existing.source == noise.source)
                    throw ConfigError("config: duplicate source '" + noise.source.name + "'");
            noise.jitter_sigma = require_nonneg(sec, "jitter_sigma", 0.0);
            noise.drop_rate = require_rate(sec, "drop_rate", 0.0);
            noise.confusion_rate = require_rate(sec, "confusion_rate", 0.0);
            const std::string* xw = sec.find("crosswalk");
            if (!xw || trim(*xw).empty())
                throw ConfigError("config [" + sec.name + "]: missing crosswalk");
            cfg.crosswalks[noise.source.name] = resolve(base, *xw);
            cfg.params.sources.push_back(std::move(noise));
        } else {
            throw ConfigError("config: unknown section '" + sec.name + "'");
        }
    }
    if (!have_general) throw ConfigError("config: missing [general] section");
    if (cfg.params.sources.empty())
        throw ConfigError("config: synth needs at least one [source:...] section");
    return cfg;
}

}  // namespace parcelfuse
