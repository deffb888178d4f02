#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "parcelfuse/ingest.hpp"
#include "parcelfuse/records.hpp"
#include "parcelfuse/taxonomy.hpp"

namespace parcelfuse {

// One "key = value" INI-style section. Keys keep file order.
struct IniSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
    std::size_t line = 0;

    const std::string* find(std::string_view key) const;
};

// Parses the "[section]" / "key = value" config format. '#' and ';' start
// comments. Content before the first section header goes into an unnamed
// section "".
std::vector<IniSection> parse_ini(std::istream& in);

// One source dataset to ingest.
struct SourceConfig {
    Source source;
    std::string format;  // "poi_csv" or "osm_xml"
    std::filesystem::path path;
    std::filesystem::path crosswalk;
};

// Inputs and options for the validate/assign/agree/evaluate commands.
struct RunConfig {
    std::filesystem::path footprints;
    GeoJsonOptions geojson;
    std::filesystem::path taxonomy;
    std::filesystem::path authoritative_crosswalk;
    std::vector<SourceConfig> sources;
    double radius = 10.0;
    ProjectionSpec projection;
    std::filesystem::path output_dir = "out";

    // Relative paths in the file resolve against the config's directory.
    // Throws ConfigError on unusable values or a missing file.
    static RunConfig load(const std::filesystem::path& path);
};

// Noise model for one synthesized source.
struct SourceNoise {
    Source source;
    double jitter_sigma = 0.0;    // meters
    double drop_rate = 0.0;       // [0, 1]
    double confusion_rate = 0.0;  // [0, 1]
};

struct SynthParams {
    std::uint64_t seed = 0;
    std::size_t rows = 1;
    std::size_t cols = 1;
    double parcel_size = 20.0;  // meters per side
    double gap = 5.0;           // meters between parcels
    std::vector<SourceNoise> sources;
    std::vector<LbcsCode> class_palette;
    ProjectionSpec projection;
};

// Inputs and options for the synth command.
struct SynthConfig {
    SynthParams params;
    std::filesystem::path taxonomy;
    std::filesystem::path authoritative_crosswalk;
    std::map<std::string, std::filesystem::path> crosswalks;  // by source name
    std::filesystem::path output_dir = "out";

    static SynthConfig load(const std::filesystem::path& path);
};

}  // namespace parcelfuse
