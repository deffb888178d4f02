#include "parcelfuse/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "parcelfuse/csv.hpp"
#include "parcelfuse/errors.hpp"

namespace parcelfuse {

std::uint64_t SplitMix64::next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double SplitMix64::next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t SplitMix64::bounded(std::uint64_t raw, std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(raw) * static_cast<unsigned __int128>(n)) >> 64);
}

std::size_t SplitMix64::next_index(std::size_t n) { return bounded(next(), n); }

void SplitMix64::next_gaussian_pair(double& z0, double& z1) {
    const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(next() >> 11) * 0x1.0p-53;       // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    z0 = r * std::cos(a);
    z1 = r * std::sin(a);
}

namespace {

std::string parcel_id_for(std::size_t ordinal) {
    std::string digits = std::to_string(ordinal);
    const std::size_t width = 6;
    std::string out = "P";
    if (digits.size() < width) out.append(width - digits.size(), '0');
    return out + digits;
}

std::string xml_escape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (const char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

void validate_params(const SynthParams& params, const LbcsTaxonomy& taxonomy,
                     const CrosswalkTable& crosswalk) {
    if (params.rows < 1 || params.cols < 1)
        throw std::invalid_argument("synth: rows and cols must be >= 1");
    if (!(params.parcel_size > 0.0))
        throw std::invalid_argument("synth: parcel_size must be > 0");
    if (!(params.gap >= 0.0)) throw std::invalid_argument("synth: gap must be >= 0");
    if (params.class_palette.empty())
        throw std::invalid_argument("synth: class palette must not be empty");
    if (params.sources.empty())
        throw std::invalid_argument("synth: at least one source is required");
    for (const LbcsCode code : params.class_palette)
        if (!taxonomy.has(code))
            throw std::invalid_argument("synth: palette code " + std::to_string(code.value) +
                                        " not in taxonomy");
    for (const auto& noise : params.sources) {
        if (!(noise.jitter_sigma >= 0.0))
            throw std::invalid_argument("synth: jitter_sigma must be >= 0");
        if (noise.drop_rate < 0.0 || noise.drop_rate > 1.0)
            throw std::invalid_argument("synth: drop_rate must be in [0, 1]");
        if (noise.confusion_rate < 0.0 || noise.confusion_rate > 1.0)
            throw std::invalid_argument("synth: confusion_rate must be in [0, 1]");
        for (const LbcsCode code : params.class_palette)
            if (!crosswalk.tag_for(noise.source, GeometryKind::Point, code))
                throw std::invalid_argument("synth: source '" + noise.source.name +
                                            "' cannot express code " +
                                            std::to_string(code.value) + " as a point tag");
    }
}

}  // namespace

SynthOutput generate(const SynthParams& params, const LbcsTaxonomy& taxonomy,
                     const CrosswalkTable& crosswalk, const AuthoritativeCrosswalk& authx) {
    validate_params(params, taxonomy, crosswalk);

    SynthOutput out;
    const std::size_t total = params.rows * params.cols;
    const double pitch = params.parcel_size + params.gap;

    SplitMix64 master(params.seed);
    SplitMix64 class_rng(master.next());
    std::vector<std::uint64_t> source_seeds;
    source_seeds.reserve(params.sources.size());
    for (std::size_t i = 0; i < params.sources.size(); ++i) source_seeds.push_back(master.next());

    std::vector<std::size_t> planted;  // palette index per parcel
    planted.reserve(total);
    out.footprints.reserve(total);
    for (std::size_t r = 0; r < params.rows; ++r) {
        for (std::size_t c = 0; c < params.cols; ++c) {
            const std::size_t ordinal = r * params.cols + c;
            const std::string id = parcel_id_for(ordinal);
            const double x0 = static_cast<double>(c) * pitch;
            const double y0 = static_cast<double>(r) * pitch;
            const double s = params.parcel_size;
            Ring ring(std::vector<Point>{
                {x0, y0}, {x0 + s, y0}, {x0 + s, y0 + s}, {x0, y0 + s}});
            const std::size_t pick = class_rng.next_index(params.class_palette.size());
            const LbcsCode code = params.class_palette[pick];
            planted.push_back(pick);
            out.truth.emplace(id, code);
            out.footprints.push_back(
                {id, Polygon(std::move(ring)), authx.to_authoritative(code)});
        }
    }

    for (std::size_t si = 0; si < params.sources.size(); ++si) {
        const SourceNoise& noise = params.sources[si];
        SplitMix64 rng(source_seeds[si]);
        std::vector<SourceRecord> records;
        for (std::size_t ordinal = 0; ordinal < total; ++ordinal) {
            const double drop_u = rng.next_unit();
            double gx = 0.0, gy = 0.0;
            rng.next_gaussian_pair(gx, gy);
            const double conf_u = rng.next_unit();
            const std::uint64_t conf_raw = rng.next();
            if (drop_u < noise.drop_rate) continue;

            std::size_t pick = planted[ordinal];
            if (conf_u < noise.confusion_rate && params.class_palette.size() > 1) {
                std::size_t alt = SplitMix64::bounded(conf_raw, params.class_palette.size() - 1);
                if (alt >= pick) ++alt;  // never the planted class
                pick = alt;
            }
            const LbcsCode code = params.class_palette[pick];
            const auto tag = crosswalk.tag_for(noise.source, GeometryKind::Point, code);

            const ParcelFootprint& fp = out.footprints[ordinal];
            const BoundingBox& b = fp.geometry.bounds();
            const Point center{0.5 * (b.min_x + b.max_x), 0.5 * (b.min_y + b.max_y)};

            SourceRecord rec;
            rec.source = noise.source;
            rec.record_id = noise.source.kind == SourceKind::Osm
                                ? "n" + std::to_string(ordinal + 1)
                                : noise.source.name + "-" + std::to_string(ordinal);
            rec.geometry = Point{center.x + gx * noise.jitter_sigma,
                                 center.y + gy * noise.jitter_sigma};
            rec.tags.emplace_back(tag->first, tag->second);
            records.push_back(std::move(rec));
        }
        out.records.emplace_back(noise.source, std::move(records));
    }
    return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path.string());
    return out;
}

void write_footprints_geojson(const SynthOutput& out, const SynthParams& params,
                              const std::filesystem::path& path) {
    nlohmann::ordered_json doc;
    doc["type"] = "FeatureCollection";
    auto& features = doc["features"] = nlohmann::ordered_json::array();
    for (const auto& fp : out.footprints) {
        nlohmann::ordered_json feature;
        feature["type"] = "Feature";
        feature["properties"]["mapblklot"] = fp.parcel_id;
        if (fp.authoritative_class)
            feature["properties"]["landuse"] = *fp.authoritative_class;
        feature["geometry"]["type"] = "Polygon";
        auto ring = nlohmann::ordered_json::array();
        const auto& verts = fp.geometry.exterior().vertices();
        for (std::size_t i = 0; i <= verts.size(); ++i) {
            const Point& p = verts[i % verts.size()];
            double lat = 0.0, lon = 0.0;
            unproject(p, params.projection, lat, lon);
            ring.push_back(nlohmann::ordered_json::array({lon, lat}));
        }
        feature["geometry"]["coordinates"] = nlohmann::ordered_json::array({std::move(ring)});
        features.push_back(std::move(feature));
    }
    auto stream = open_out(path);
    stream << doc.dump(2) << '\n';
}

void write_poi_csv(const std::vector<SourceRecord>& records, const SynthParams& params,
                   const std::filesystem::path& path) {
    auto out = open_out(path);
    csv::write_row(out, {"id", "lat", "lon", "type"});
    for (const auto& rec : records) {
        double lat = 0.0, lon = 0.0;
        unproject(rec.point(), params.projection, lat, lon);
        csv::write_row(out, {rec.record_id, csv::format_double(lat), csv::format_double(lon),
                             rec.tags.front().second});
    }
}

void write_osm_xml(const std::vector<SourceRecord>& records, const SynthParams& params,
                   const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<osm version=\"0.6\" generator=\"parcelfuse\">\n";
    for (const auto& rec : records) {
        double lat = 0.0, lon = 0.0;
        unproject(rec.point(), params.projection, lat, lon);
        // record ids are "n<id>"; strip the prefix for the XML id attribute
        out << "  <node id=\"" << xml_escape(rec.record_id.substr(1)) << "\" lat=\""
            << csv::format_double(lat) << "\" lon=\"" << csv::format_double(lon) << "\">\n";
        for (const auto& [k, v] : rec.tags)
            out << "    <tag k=\"" << xml_escape(k) << "\" v=\"" << xml_escape(v) << "\"/>\n";
        out << "  </node>\n";
    }
    out << "</osm>\n";
}

}  // namespace

void write_fixture(const SynthOutput& out, const SynthParams& params,
                   const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_footprints_geojson(out, params, dir / "footprints.geojson");

    for (const auto& [source, records] : out.records) {
        if (source.kind == SourceKind::Osm)
            write_osm_xml(records, params, dir / (source.name + ".xml"));
        else
            write_poi_csv(records, params, dir / (source.name + ".csv"));
    }

    std::map<std::string, const ParcelFootprint*> by_id;
    for (const auto& fp : out.footprints) by_id.emplace(fp.parcel_id, &fp);
    auto truth_out = open_out(dir / "truth.csv");
    csv::write_row(truth_out, {"parcel_id", "lbcs", "datasf"});
    for (const auto& [id, code] : out.truth) {
        const ParcelFootprint* fp = by_id.at(id);
        csv::write_row(truth_out,
                       {id, std::to_string(code.value),
                        fp->authoritative_class ? *fp->authoritative_class : std::string()});
    }
}

LabelTable oracle_assign(const Source& source, const std::vector<SourceRecord>& records,
                         const CrosswalkTable& crosswalk, const LbcsTaxonomy& taxonomy,
                         const std::vector<ParcelFootprint>& footprints, double radius) {
    if (radius < 0.0) throw std::invalid_argument("oracle_assign: radius must be >= 0");

    LabelTable table;
    table.source = source;
    std::set<std::string> seen;

    auto better = [](const ParcelFootprint& a, const ParcelFootprint& b) {
        const double area_a = a.geometry.bounds().area();
        const double area_b = b.geometry.bounds().area();
        if (area_a != area_b) return area_a < area_b;
        return a.parcel_id < b.parcel_id;
    };

    for (const auto& record : records) {
        if (record.source != source)
            throw std::invalid_argument("oracle_assign: record " + record.record_id +
                                        " belongs to a different source");
        if (!seen.insert(record.record_id).second) continue;
        ++table.stats.total_records;

        const std::set<LbcsCode> codes = crosswalk.align(record);
        if (codes.empty()) {
            ++table.stats.discarded_unaligned;
            continue;
        }
        ++table.stats.aligned_records;
        for (const LbcsCode code : codes)
            if (!taxonomy.has(code))
                throw std::invalid_argument("oracle_assign: code " +
                                            std::to_string(code.value) + " not in taxonomy");

        std::set<std::string> parcels;
        if (record.is_point()) {
            const Point& p = record.point();
            const ParcelFootprint* best = nullptr;
            for (const auto& fp : footprints)
                if (contains(fp.geometry, p) && (!best || better(fp, *best))) best = &fp;
            if (!best) {
                double best_dist = 0.0;
                for (const auto& fp : footprints) {
                    const double d = distance(fp.geometry, p);
                    if (d > radius) continue;
                    if (!best || d < best_dist || (d == best_dist && better(fp, *best))) {
                        best = &fp;
                        best_dist = d;
                    }
                }
            }
            if (best) parcels.insert(best->parcel_id);
        } else {
            for (const auto& fp : footprints)
                if (intersects_interior(record.polygon(), fp.geometry))
                    parcels.insert(fp.parcel_id);
        }

        if (parcels.empty()) {
            ++table.stats.discarded_spatial;
            continue;
        }
        ++table.stats.valid_records;
        for (const auto& parcel : parcels) {
            auto& label_set = table.labels[parcel];
            for (const LbcsCode code : codes) {
                label_set.insert(code);
                table.provenance[{parcel, code}].insert(record.record_id);
            }
        }
    }
    return table;
}

}  // namespace parcelfuse
