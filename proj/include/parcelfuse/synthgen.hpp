#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "parcelfuse/assign.hpp"
#include "parcelfuse/config.hpp"
#include "parcelfuse/records.hpp"
#include "parcelfuse/taxonomy.hpp"

namespace parcelfuse {

// Deterministic 64-bit generator (splitmix64). Identical seeds give
// identical streams on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    double next_unit();  // [0, 1)
    std::size_t next_index(std::size_t n);  // [0, n), n >= 1
    void next_gaussian_pair(double& z0, double& z1);

    static std::size_t bounded(std::uint64_t raw, std::size_t n);

private:
    std::uint64_t state_;
};

struct SynthOutput {
    std::vector<ParcelFootprint> footprints;  // row-major grid order
    std::map<std::string, LbcsCode> truth;    // parcel id -> planted code
    std::vector<std::pair<Source, std::vector<SourceRecord>>> records;  // params order
};

// Builds a rows x cols grid of square parcels with planted classes drawn
// from the palette, then emits per-source point records with the
// configured jitter, drop, and confusion noise.
//
// Draw order is fixed: one master stream seeds the class stream and then
// one stream per source, in params order. The class stream draws one index
// per parcel (row-major). Each source stream draws, per parcel, a drop
// uniform, a gaussian pair, a confusion uniform, and a confusion pick, in
// that order, whether or not the values end up used; noise-rate changes
// therefore never shift later draws.
//
// Throws std::invalid_argument when a palette code is missing from the
// taxonomy or a source's crosswalk cannot express it as a point tag.
SynthOutput generate(const SynthParams& params, const LbcsTaxonomy& taxonomy,
                     const CrosswalkTable& crosswalk, const AuthoritativeCrosswalk& authx);

// Writes the fixture in the ingest formats: footprints.geojson, one
// <source>.csv per point source, <source>.xml for osm-kind sources, and
// truth.csv (parcel_id,lbcs,datasf). Identical inputs give byte-identical
// files.
void write_fixture(const SynthOutput& out, const SynthParams& params,
                   const std::filesystem::path& dir);

// Reference assignment used to check the indexed pipeline: identical
// record flow and tie-break rules, but every lookup is an exhaustive scan
// over all footprints.
LabelTable oracle_assign(const Source& source, const std::vector<SourceRecord>& records,
                         const CrosswalkTable& crosswalk, const LbcsTaxonomy& taxonomy,
                         const std::vector<ParcelFootprint>& footprints, double radius);

}  // namespace parcelfuse
