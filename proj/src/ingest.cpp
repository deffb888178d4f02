#include "parcelfuse/ingest.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "parcelfuse/csv.hpp"
#include "parcelfuse/strings.hpp"

namespace parcelfuse {

namespace {

constexpr double kEarthRadiusMeters = 6371000.0;
constexpr double kDegToRad = std::numbers::pi / 180.0;

bool in_geo_range(double lat, double lon) {
    return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

}  // namespace

void ProjectionSpec::validate() const {
    if (mode == ProjectionMode::AlreadyPlanar) return;
    if (!in_geo_range(origin_lat, origin_lon))
        throw ConfigError("projection origin out of range: lat " +
                          csv::format_double(origin_lat) + ", lon " +
                          csv::format_double(origin_lon));
}

Point project(double lat, double lon, const ProjectionSpec& proj) {
    if (proj.mode == ProjectionMode::AlreadyPlanar) return Point{lon, lat};
    const double x = kEarthRadiusMeters * (lon - proj.origin_lon) * kDegToRad *
                     std::cos(proj.origin_lat * kDegToRad);
    const double y = kEarthRadiusMeters * (lat - proj.origin_lat) * kDegToRad;
    return Point{x, y};
}

void unproject(const Point& p, const ProjectionSpec& proj, double& lat, double& lon) {
    if (proj.mode == ProjectionMode::AlreadyPlanar) {
        lat = p.y;
        lon = p.x;
        return;
    }
    lat = proj.origin_lat + p.y / (kEarthRadiusMeters * kDegToRad);
    lon = proj.origin_lon +
          p.x / (kEarthRadiusMeters * kDegToRad * std::cos(proj.origin_lat * kDegToRad));
}

// ---------------------------------------------------------------------------
// GeoJSON footprints

namespace {

bool known_class_name(const std::string& name) {
    for (const auto& k : datasf_class_names())
        if (k == name) return true;
    return false;
}

std::optional<Polygon> polygon_from_rings(const nlohmann::json& rings,
                                          const ProjectionSpec& proj, std::string& err) {
    if (!rings.is_array() || rings.empty()) {
        err = "polygon coordinates must be a non-empty array of rings";
        return std::nullopt;
    }
    std::vector<Ring> parsed;
    for (const auto& ring : rings) {
        if (!ring.is_array()) {
            err = "ring must be an array of positions";
            return std::nullopt;
        }
        std::vector<Point> pts;
        for (const auto& pos : ring) {
            if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
                err = "position must be [lon, lat]";
                return std::nullopt;
            }
            const double lon = pos[0].get<double>();
            const double lat = pos[1].get<double>();
            if (proj.mode == ProjectionMode::Equirectangular && !in_geo_range(lat, lon)) {
                err = "position out of geographic range";
                return std::nullopt;
            }
            pts.push_back(project(lat, lon, proj));
        }
        try {
            parsed.emplace_back(std::move(pts));
        } catch (const std::invalid_argument& e) {
            err = e.what();
            return std::nullopt;
        }
    }
    try {
        Ring exterior = std::move(parsed.front());
        parsed.erase(parsed.begin());
        return Polygon(std::move(exterior), std::move(parsed));
    } catch (const std::invalid_argument& e) {
        err = e.what();
        return std::nullopt;
    }
}

}  // namespace

FootprintReadResult read_footprints_geojson(std::istream& in, const ProjectionSpec& proj,
                                            const GeoJsonOptions& opts) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("geojson: ") + e.what());
    }
    if (!doc.is_object() || doc.value("type", std::string()) != "FeatureCollection" ||
        !doc.contains("features") || !doc["features"].is_array())
        throw ParseError("geojson: expected a FeatureCollection with a features array");

    FootprintReadResult out;
    std::unordered_set<std::string> seen_ids;

    auto add = [&](std::size_t feature_idx, std::string id, const nlohmann::json& rings,
                   const std::optional<std::string>& cls) {
        std::string err;
        auto poly = polygon_from_rings(rings, proj, err);
        if (!poly) {
            out.issues.push_back({feature_idx, "feature " + std::to_string(feature_idx) +
                                                   " (" + id + "): " + err});
            return;
        }
        if (!seen_ids.insert(id).second) {
            out.issues.push_back({feature_idx, "feature " + std::to_string(feature_idx) +
                                                   ": duplicate parcel id '" + id + "'"});
            return;
        }
        out.footprints.push_back({std::move(id), std::move(*poly), cls});
    };

    std::size_t idx = 0;
    for (const auto& feat : doc["features"]) {
        const std::size_t i = idx++;
        ++out.features_seen;
        if (!feat.is_object()) {
            out.issues.push_back({i, "feature " + std::to_string(i) + ": not an object"});
            continue;
        }
        const auto props_it = feat.find("properties");
        const nlohmann::json props =
            (props_it != feat.end() && props_it->is_object()) ? *props_it
                                                              : nlohmann::json::object();
        std::string id;
        if (const auto it = props.find(opts.id_property); it != props.end()) {
            if (it->is_string()) id = it->get<std::string>();
            else if (it->is_number_integer()) id = std::to_string(it->get<long long>());
        }
        if (id.empty()) {
            out.issues.push_back({i, "feature " + std::to_string(i) + ": missing id property '" +
                                         opts.id_property + "'"});
            continue;
        }

        std::optional<std::string> cls;
        if (const auto it = props.find(opts.class_property);
            it != props.end() && it->is_string() && !it->get<std::string>().empty()) {
            std::string value = it->get<std::string>();
            if (known_class_name(value)) cls = std::move(value);
            else ++out.unknown_class_count;
        }

        const auto geom_it = feat.find("geometry");
        if (geom_it == feat.end() || !geom_it->is_object()) {
            out.issues.push_back({i, "feature " + std::to_string(i) + ": missing geometry"});
            continue;
        }
        const std::string type = geom_it->value("type", std::string());
        const auto coords_it = geom_it->find("coordinates");
        if (coords_it == geom_it->end()) {
            out.issues.push_back({i, "feature " + std::to_string(i) + ": missing coordinates"});
            continue;
        }
        if (type == "Polygon") {
            add(i, id, *coords_it, cls);
        } else if (type == "MultiPolygon") {
            if (!coords_it->is_array()) {
                out.issues.push_back(
                    {i, "feature " + std::to_string(i) + ": bad MultiPolygon coordinates"});
                continue;
            }
            std::size_t part = 0;
            for (const auto& rings : *coords_it)
                add(i, id + "#" + std::to_string(part++), rings, cls);
        } else {
            out.issues.push_back({i, "feature " + std::to_string(i) + " (" + id +
                                         "): geometry type '" + type + "' is not areal"});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// POI CSV

PoiReadResult read_poi_csv(std::istream& in, const Source& source, const ProjectionSpec& proj) {
    csv::Reader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw ParseError("poi csv: empty file, missing header");

    long id_col = -1, lat_col = -1, lon_col = -1, type_col = -1;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string_view name = trim(fields[i]);
        if (name == "id") id_col = static_cast<long>(i);
        else if (name == "lat") lat_col = static_cast<long>(i);
        else if (name == "lon") lon_col = static_cast<long>(i);
        else if (name == "type") type_col = static_cast<long>(i);
    }
    for (const auto& [col, name] : {std::pair<long, const char*>{id_col, "id"},
                                    {lat_col, "lat"},
                                    {lon_col, "lon"},
                                    {type_col, "type"}})
        if (col < 0) throw ParseError(std::string("poi csv: missing column '") + name + "'");

    const std::size_t need = static_cast<std::size_t>(
        std::max(std::max(id_col, lat_col), std::max(lon_col, type_col)));

    PoiReadResult out;
    while (reader.next(fields)) {
        ++out.rows_seen;
        const std::size_t line = reader.line();
        if (fields.size() <= need) {
            out.issues.push_back({line, "line " + std::to_string(line) + ": too few columns"});
            continue;
        }
        std::string id(trim(fields[static_cast<std::size_t>(id_col)]));
        if (id.empty()) {
            out.issues.push_back({line, "line " + std::to_string(line) + ": empty id"});
            continue;
        }
        const auto lat = parse_finite_double(fields[static_cast<std::size_t>(lat_col)]);
        const auto lon = parse_finite_double(fields[static_cast<std::size_t>(lon_col)]);
        if (!lat || !lon) {
            out.issues.push_back({line, "line " + std::to_string(line) + ": bad coordinates"});
            continue;
        }
        if (proj.mode == ProjectionMode::Equirectangular && !in_geo_range(*lat, *lon)) {
            out.issues.push_back(
                {line, "line " + std::to_string(line) + ": coordinates out of range"});
            continue;
        }
        SourceRecord rec;
        rec.source = source;
        rec.record_id = std::move(id);
        rec.geometry = project(*lat, *lon, proj);
        rec.tags.emplace_back("type", fields[static_cast<std::size_t>(type_col)]);
        out.records.push_back(std::move(rec));
    }
    return out;
}

// ---------------------------------------------------------------------------
// OSM XML

namespace {

struct XmlTag {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    bool open = false;
    bool close = false;  // self-closing tags set both
    std::size_t line = 0;

    const std::string* attr(std::string_view key) const {
        for (const auto& [k, v] : attrs)
            if (k == key) return &v;
        return nullptr;
    }
};

class XmlScanner {
public:
    explicit XmlScanner(std::istream& in) {
        std::ostringstream ss;
        ss << in.rdbuf();
        text_ = ss.str();
    }

    std::optional<XmlTag> next();

private:
    std::string text_;
    std::size_t pos_ = 0;
    std::size_t counted_pos_ = 0;
    std::size_t counted_line_ = 1;

    std::size_t line_at(std::size_t pos) {
        while (counted_pos_ < pos && counted_pos_ < text_.size()) {
            if (text_[counted_pos_] == '\n') ++counted_line_;
            ++counted_pos_;
        }
        return counted_line_;
    }

    [[noreturn]] void fail(std::size_t pos, const std::string& what) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < pos && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError("osm xml: line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + what);
    }

    static bool name_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':';
    }
    static bool name_char(char c) {
        return name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
    }

    std::string read_name() {
        if (pos_ >= text_.size() || !name_start(text_[pos_])) fail(pos_, "expected a name");
        const std::size_t start = pos_;
        while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                text_[pos_] == '\r'))
            ++pos_;
    }

    std::string decode_entities(std::string_view raw, std::size_t at);
};

std::string XmlScanner::decode_entities(std::string_view raw, std::size_t at) {
    if (raw.find('&') == std::string_view::npos) return std::string(raw);
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '&') {
            out.push_back(raw[i]);
            continue;
        }
        const std::size_t semi = raw.find(';', i);
        if (semi == std::string_view::npos) fail(at, "unterminated entity");
        const std::string_view name = raw.substr(i + 1, semi - i - 1);
        if (name == "amp") out.push_back('&');
        else if (name == "lt") out.push_back('<');
        else if (name == "gt") out.push_back('>');
        else if (name == "quot") out.push_back('"');
        else if (name == "apos") out.push_back('\'');
        else if (!name.empty() && name[0] == '#') {
            unsigned long cp = 0;
            try {
                cp = (name.size() > 1 && (name[1] == 'x' || name[1] == 'X'))
                         ? std::stoul(std::string(name.substr(2)), nullptr, 16)
                         : std::stoul(std::string(name.substr(1)), nullptr, 10);
            } catch (...) {
                fail(at, "bad numeric entity '&" + std::string(name) + ";'");
            }
            // UTF-8 encode
            if (cp < 0x80) {
                out.push_back(static_cast<char>(cp));
            } else if (cp < 0x800) {
                out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
                out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            } else if (cp < 0x10000) {
                out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
                out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            } else if (cp < 0x110000) {
                out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
                out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
                out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            } else {
                fail(at, "numeric entity out of range");
            }
        } else {
            fail(at, "unknown entity '&" + std::string(name) + ";'");
        }
        i = semi;
    }
    return out;
}

std::optional<XmlTag> XmlScanner::next() {
    const std::size_t n = text_.size();
    for (;;) {
        while (pos_ < n && text_[pos_] != '<') ++pos_;
        if (pos_ >= n) return std::nullopt;
        const std::size_t start = pos_;
        if (text_.compare(pos_, 2, "<?") == 0) {
            const std::size_t end = text_.find("?>", pos_ + 2);
            if (end == std::string::npos) fail(start, "unterminated processing instruction");
            pos_ = end + 2;
            continue;
        }
        if (text_.compare(pos_, 4, "<!--") == 0) {
            const std::size_t end = text_.find("-->", pos_ + 4);
            if (end == std::string::npos) fail(start, "unterminated comment");
            pos_ = end + 3;
            continue;
        }
        if (text_.compare(pos_, 2, "<!") == 0) {
            const std::size_t end = text_.find('>', pos_ + 2);
            if (end == std::string::npos) fail(start, "unterminated declaration");
            pos_ = end + 1;
            continue;
        }
        if (text_.compare(pos_, 2, "</") == 0) {
            pos_ += 2;
            XmlTag tag;
            tag.name = read_name();
            tag.close = true;
            tag.line = line_at(start);
            skip_ws();
            if (pos_ >= n || text_[pos_] != '>') fail(pos_, "expected '>'");
            ++pos_;
            return tag;
        }
        ++pos_;
        XmlTag tag;
        tag.name = read_name();
        tag.open = true;
        tag.line = line_at(start);
        for (;;) {
            skip_ws();
            if (pos_ >= n) fail(pos_, "unexpected end of input inside tag");
            if (text_[pos_] == '>') {
                ++pos_;
                break;
            }
            if (text_.compare(pos_, 2, "/>") == 0) {
                pos_ += 2;
                tag.close = true;
                break;
            }
            const std::string attr_name = read_name();
            skip_ws();
            if (pos_ >= n || text_[pos_] != '=') fail(pos_, "expected '=' after attribute name");
            ++pos_;
            skip_ws();
            if (pos_ >= n || (text_[pos_] != '"' && text_[pos_] != '\''))
                fail(pos_, "expected a quoted attribute value");
            const char quote = text_[pos_++];
            const std::size_t vstart = pos_;
            while (pos_ < n && text_[pos_] != quote) ++pos_;
            if (pos_ >= n) fail(vstart, "unterminated attribute value");
            tag.attrs.emplace_back(
                attr_name,
                decode_entities(std::string_view(text_).substr(vstart, pos_ - vstart), vstart));
            ++pos_;  // closing quote
        }
        return tag;
    }
}

}  // namespace

OsmReadResult read_osm_xml(std::istream& in, const ProjectionSpec& proj) {
    XmlScanner scanner(in);
    OsmReadResult out;

    struct Element {
        std::string kind;  // "node" or "way"
        std::string id;
        std::optional<Point> position;  // nodes only
        std::vector<std::string> refs;  // ways only
        std::vector<std::pair<std::string, std::string>> tags;
        std::size_t line = 0;
        std::string problem;  // first problem, empty when usable
    };

    std::unordered_map<std::string, Point> node_pos;
    std::unordered_set<std::string> way_ids;
    std::vector<Element> pending_ways;
    std::vector<std::string> stack;
    std::optional<Element> current;
    bool root_seen = false;

    auto finish_node = [&](Element& el) {
        ++out.nodes_seen;
        if (!el.problem.empty()) {
            out.issues.push_back({el.line, el.problem});
            return;
        }
        if (node_pos.count(el.id)) {
            out.issues.push_back({el.line, "node " + el.id + ": duplicate id"});
            return;
        }
        node_pos.emplace(el.id, *el.position);
        if (el.tags.empty()) {
            ++out.untagged_skipped;
            return;
        }
        SourceRecord rec;
        rec.source = Source::parse("osm");
        rec.record_id = "n" + el.id;
        rec.geometry = *el.position;
        rec.tags = std::move(el.tags);
        out.records.push_back(std::move(rec));
    };

    auto finish_way = [&](Element& el) {
        ++out.ways_seen;
        if (!el.problem.empty()) {
            out.issues.push_back({el.line, el.problem});
            return;
        }
        if (!way_ids.insert(el.id).second) {
            out.issues.push_back({el.line, "way " + el.id + ": duplicate id"});
            return;
        }
        if (el.tags.empty()) {
            ++out.untagged_skipped;
            return;
        }
        pending_ways.push_back(std::move(el));
    };

    auto handle_element = [&](XmlTag& tag, bool is_start) {
        // depth 1 is the root; node/way live at depth 2
        if (is_start && stack.size() == 2 && (tag.name == "node" || tag.name == "way")) {
            Element el;
            el.kind = tag.name;
            el.line = tag.line;
            if (const auto* id = tag.attr("id"); id && !trim(*id).empty()) {
                el.id = std::string(trim(*id));
            } else {
                el.problem = tag.name + " at line " + std::to_string(tag.line) + ": missing id";
            }
            if (tag.name == "node") {
                const auto* lat_s = tag.attr("lat");
                const auto* lon_s = tag.attr("lon");
                const auto lat = lat_s ? parse_finite_double(*lat_s) : std::nullopt;
                const auto lon = lon_s ? parse_finite_double(*lon_s) : std::nullopt;
                if (!lat || !lon) {
                    if (el.problem.empty()) el.problem = "node " + el.id + ": bad coordinates";
                } else if (proj.mode == ProjectionMode::Equirectangular &&
                           !in_geo_range(*lat, *lon)) {
                    if (el.problem.empty())
                        el.problem = "node " + el.id + ": coordinates out of range";
                } else {
                    el.position = project(*lat, *lon, proj);
                }
            }
            current = std::move(el);
            return;
        }
        if (is_start && stack.size() == 3 && current) {
            if (tag.name == "tag") {
                const auto* k = tag.attr("k");
                const auto* v = tag.attr("v");
                if (!k || !v) {
                    if (current->problem.empty())
                        current->problem = current->kind + " " + current->id +
                                           ": tag element without k/v at line " +
                                           std::to_string(tag.line);
                } else {
                    current->tags.emplace_back(*k, *v);
                }
            } else if (tag.name == "nd" && current->kind == "way") {
                const auto* ref = tag.attr("ref");
                if (!ref || trim(*ref).empty()) {
                    if (current->problem.empty())
                        current->problem = "way " + current->id + ": nd element without ref";
                } else {
                    current->refs.emplace_back(trim(*ref));
                }
            }
            // other children (e.g. inside relations) are ignored
        }
    };

    for (;;) {
        auto tag = scanner.next();
        if (!tag) break;
        if (tag->open) {
            if (stack.empty() && root_seen)
                throw ParseError("osm xml: line " + std::to_string(tag->line) +
                                 ": content after the root element");
            root_seen = true;
            stack.push_back(tag->name);
            handle_element(*tag, true);
            if (tag->close) {  // self-closing
                if (stack.size() == 2 && current && current->kind == tag->name) {
                    if (current->kind == "node") finish_node(*current);
                    else finish_way(*current);
                    current.reset();
                }
                stack.pop_back();
            }
        } else if (tag->close) {
            if (stack.empty() || stack.back() != tag->name)
                throw ParseError("osm xml: line " + std::to_string(tag->line) +
                                 ": mismatched closing tag '" + tag->name + "'");
            if (stack.size() == 2 && current && current->kind == tag->name) {
                if (current->kind == "node") finish_node(*current);
                else finish_way(*current);
                current.reset();
            }
            stack.pop_back();
        }
    }
    if (!stack.empty())
        throw ParseError("osm xml: unexpected end of input, unclosed element '" + stack.back() +
                         "'");
    if (!root_seen) throw ParseError("osm xml: no root element");

    // Ways are assembled after the whole file is read, so node order in the
    // file does not matter.
    for (auto& way : pending_ways) {
        const bool closed = way.refs.size() >= 4 && way.refs.front() == way.refs.back();
        if (!closed) {
            out.issues.push_back({way.line, "way " + way.id + ": not a closed ring"});
            continue;
        }
        std::vector<Point> pts;
        pts.reserve(way.refs.size() - 1);
        std::string missing;
        for (std::size_t i = 0; i + 1 < way.refs.size(); ++i) {
            const auto it = node_pos.find(way.refs[i]);
            if (it == node_pos.end()) {
                missing = way.refs[i];
                break;
            }
            pts.push_back(it->second);
        }
        if (!missing.empty()) {
            out.issues.push_back(
                {way.line, "way " + way.id + ": references missing node " + missing});
            continue;
        }
        try {
            SourceRecord rec;
            rec.source = Source::parse("osm");
            rec.record_id = "w" + way.id;
            rec.geometry = Polygon(Ring(std::move(pts)));
            rec.tags = std::move(way.tags);
            out.records.push_back(std::move(rec));
        } catch (const std::invalid_argument& e) {
            out.issues.push_back(
                {way.line, "way " + way.id + ": degenerate ring: " + e.what()});
        }
    }
    return out;
}

}  // namespace parcelfuse
