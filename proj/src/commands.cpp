#include "parcelfuse/commands.hpp"

#include <fstream>
#include <future>
#include <map>
#include <set>
#include <sstream>

#include "parcelfuse/assign.hpp"
#include "parcelfuse/csv.hpp"
#include "parcelfuse/errors.hpp"
#include "parcelfuse/ingest.hpp"
#include "parcelfuse/log.hpp"
#include "parcelfuse/metrics.hpp"
#include "parcelfuse/spatial_index.hpp"
#include "parcelfuse/synthgen.hpp"

namespace parcelfuse {

namespace {

template <typename F>
auto with_file(const std::filesystem::path& path, F&& f) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path.string());
    try {
        return f(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path.string());
    return out;
}

struct SourceData {
    SourceConfig cfg;
    CrosswalkTable crosswalk;
    std::vector<SourceRecord> records;
};

struct Inputs {
    LbcsTaxonomy taxonomy;
    AuthoritativeCrosswalk authx;
    std::vector<ParcelFootprint> footprints;
    FootprintIndex index;
    std::vector<SourceData> sources;
};

void log_issues(const std::string& what, const std::vector<RecordIssue>& issues) {
    if (issues.empty()) return;
    log_warn(what + ": skipped " + std::to_string(issues.size()) + " element(s)");
    for (const auto& issue : issues) log_debug(what + ": " + issue.message);
}

Inputs load_inputs(const RunConfig& cfg) {
    Inputs in;
    in.taxonomy = with_file(cfg.taxonomy,
                            [](std::istream& s) { return LbcsTaxonomy::load(s); });
    in.authx = with_file(cfg.authoritative_crosswalk, [&](std::istream& s) {
        return AuthoritativeCrosswalk::load(s, in.taxonomy);
    });

    const FootprintReadResult fps = with_file(cfg.footprints, [&](std::istream& s) {
        return read_footprints_geojson(s, cfg.projection, cfg.geojson);
    });
    log_issues(cfg.footprints.string(), fps.issues);
    if (fps.unknown_class_count > 0)
        log_warn(cfg.footprints.string() + ": " + std::to_string(fps.unknown_class_count) +
                 " feature(s) with unknown authoritative class");
    log_info(cfg.footprints.string() + ": " + std::to_string(fps.footprints.size()) +
             " footprints from " + std::to_string(fps.features_seen) + " features");
    in.footprints = std::move(fps.footprints);
    in.index = FootprintIndex::build(in.footprints);

    for (const auto& scfg : cfg.sources) {
        SourceData data;
        data.cfg = scfg;
        data.crosswalk = with_file(scfg.crosswalk, [&](std::istream& s) {
            return CrosswalkTable::load(s, in.taxonomy);
        });
        if (scfg.format == "poi_csv") {
            PoiReadResult res = with_file(scfg.path, [&](std::istream& s) {
                return read_poi_csv(s, scfg.source, cfg.projection);
            });
            log_issues(scfg.path.string(), res.issues);
            log_info(scfg.path.string() + ": " + std::to_string(res.records.size()) +
                     " records from " + std::to_string(res.rows_seen) + " rows");
            data.records = std::move(res.records);
        } else {
            OsmReadResult res = with_file(scfg.path, [&](std::istream& s) {
                return read_osm_xml(s, cfg.projection);
            });
            log_issues(scfg.path.string(), res.issues);
            if (res.untagged_skipped > 0)
                log_info(scfg.path.string() + ": skipped " +
                         std::to_string(res.untagged_skipped) + " untagged element(s)");
            log_info(scfg.path.string() + ": " + std::to_string(res.records.size()) +
                     " records from " + std::to_string(res.nodes_seen) + " nodes and " +
                     std::to_string(res.ways_seen) + " ways");
            // records arrive with the osm source kind; keep the configured name
            for (auto& rec : res.records) rec.source = scfg.source;
            data.records = std::move(res.records);
        }
        in.sources.push_back(std::move(data));
    }
    return in;
}

// One label table per source, built concurrently.
std::vector<LabelTable> build_all_tables(const Inputs& in, double radius) {
    std::vector<std::future<LabelTable>> futures;
    futures.reserve(in.sources.size());
    for (const auto& data : in.sources)
        futures.push_back(std::async(std::launch::async, [&in, &data, radius] {
            return build_label_table(data.cfg.source, data.records, data.crosswalk, in.taxonomy,
                                     in.index, in.footprints, radius);
        }));
    std::vector<LabelTable> tables;
    tables.reserve(futures.size());
    for (auto& f : futures) tables.push_back(f.get());
    return tables;
}

void write_markdown_row(std::ostream& out, const std::vector<std::string>& cells) {
    out << '|';
    for (const auto& cell : cells) out << ' ' << cell << " |";
    out << '\n';
}

void write_markdown_table(std::ostream& out, const std::vector<std::string>& header,
                          const std::vector<std::vector<std::string>>& rows) {
    write_markdown_row(out, header);
    std::vector<std::string> rule(header.size(), "---");
    write_markdown_row(out, rule);
    for (const auto& row : rows) write_markdown_row(out, row);
}

std::vector<std::string> stats_row(const Source& source, const ValidityStats& stats) {
    return {source.name,
            std::to_string(stats.total_records),
            std::to_string(stats.aligned_records),
            std::to_string(stats.valid_records),
            std::to_string(stats.discarded_unaligned),
            std::to_string(stats.discarded_spatial)};
}

}  // namespace

RunConfig with_sources(RunConfig cfg, const std::vector<std::string>& names) {
    if (names.empty()) return cfg;
    std::set<std::string> wanted;
    for (const auto& raw : names) {
        const Source parsed = Source::parse(raw);
        if (parsed.name.empty()) throw ConfigError("empty source name in --sources");
        bool found = false;
        for (const auto& scfg : cfg.sources)
            if (scfg.source == parsed) found = true;
        if (!found) throw ConfigError("unknown source '" + raw + "'");
        wanted.insert(parsed.name);
    }
    std::vector<SourceConfig> kept;
    for (auto& scfg : cfg.sources)
        if (wanted.count(scfg.source.name)) kept.push_back(std::move(scfg));
    cfg.sources = std::move(kept);
    return cfg;
}

int cmd_validate(const RunConfig& cfg) {
    const Inputs in = load_inputs(cfg);
    const std::vector<LabelTable> tables = build_all_tables(in, cfg.radius);

    std::filesystem::create_directories(cfg.output_dir);
    auto csv_out = open_out(cfg.output_dir / "validity.csv");
    csv::write_row(csv_out, {"source", "total_records", "aligned_records", "valid_records",
                             "discarded_unaligned", "discarded_spatial"});
    std::vector<std::vector<std::string>> md_rows;
    for (const auto& table : tables) {
        const auto row = stats_row(table.source, table.stats);
        csv::write_row(csv_out, row);
        md_rows.push_back(row);
    }

    auto md_out = open_out(cfg.output_dir / "validity.md");
    write_markdown_table(md_out,
                         {"Source", "Total", "Aligned", "Valid", "Discarded unaligned",
                          "Discarded spatial"},
                         md_rows);
    return 0;
}

int cmd_assign(const RunConfig& cfg) {
    const Inputs in = load_inputs(cfg);
    const std::vector<LabelTable> tables = build_all_tables(in, cfg.radius);

    std::filesystem::create_directories(cfg.output_dir);
    for (const auto& table : tables) {
        auto labels_out = open_out(cfg.output_dir / ("labels_" + table.source.name + ".csv"));
        csv::write_row(labels_out, {"parcel_id", "lbcs", "record_ids"});
        for (const auto& [parcel, codes] : table.labels) {
            for (const LbcsCode code : codes) {
                const auto& ids = table.provenance.at({parcel, code});
                std::string joined;
                for (const auto& id : ids) {
                    if (!joined.empty()) joined.push_back(';');
                    joined += id;
                }
                csv::write_row(labels_out, {parcel, std::to_string(code.value), joined});
            }
        }

        auto stats_out = open_out(cfg.output_dir / ("stats_" + table.source.name + ".csv"));
        csv::write_row(stats_out, {"counter", "value"});
        const ValidityStats& s = table.stats;
        csv::write_row(stats_out, {"total_records", std::to_string(s.total_records)});
        csv::write_row(stats_out, {"aligned_records", std::to_string(s.aligned_records)});
        csv::write_row(stats_out, {"valid_records", std::to_string(s.valid_records)});
        csv::write_row(stats_out, {"discarded_unaligned", std::to_string(s.discarded_unaligned)});
        csv::write_row(stats_out, {"discarded_spatial", std::to_string(s.discarded_spatial)});
    }
    return 0;
}

int cmd_agree(const RunConfig& cfg, const std::vector<int>& classes) {
    if (cfg.sources.size() < 2)
        throw ConfigError("agree needs at least two sources");
    const Inputs in = load_inputs(cfg);
    const std::vector<LabelTable> tables = build_all_tables(in, cfg.radius);

    std::vector<LbcsCode> selected;
    if (classes.empty()) {
        selected = in.taxonomy.codes();
    } else {
        for (const int value : classes) {
            if (!in.taxonomy.has(LbcsCode{value}))
                throw ConfigError("unknown LBCS code in --classes: " + std::to_string(value));
            selected.push_back(LbcsCode{value});
        }
    }

    std::vector<const LabelTable*> table_ptrs;
    for (const auto& t : tables) table_ptrs.push_back(&t);

    std::filesystem::create_directories(cfg.output_dir);
    auto csv_out = open_out(cfg.output_dir / "agreement.csv");
    csv::write_row(csv_out, {"class", "source_a", "source_b", "count_a", "count_b",
                             "intersection", "union", "percent"});

    std::vector<std::string> header{"Class"};
    for (const auto& t : tables) header.push_back(t.source.name);
    for (std::size_t i = 0; i < tables.size(); ++i)
        for (std::size_t j = i + 1; j < tables.size(); ++j)
            header.push_back(tables[i].source.name + "&" + tables[j].source.name);
    header.push_back("All");

    std::vector<std::vector<std::string>> md_rows;
    for (const LbcsCode code : selected) {
        std::vector<std::string> md_row{std::to_string(code.value)};
        for (const auto& t : tables)
            md_row.push_back(
                std::to_string(parcels_with_class(t, code, in.taxonomy).size()));
        for (std::size_t i = 0; i < tables.size(); ++i) {
            for (std::size_t j = i + 1; j < tables.size(); ++j) {
                const AgreementCell cell =
                    pairwise_agreement(tables[i], tables[j], code, in.taxonomy);
                csv::write_row(csv_out,
                               {std::to_string(code.value), cell.source_a, cell.source_b,
                                std::to_string(cell.count_a), std::to_string(cell.count_b),
                                std::to_string(cell.intersection), std::to_string(cell.unions),
                                cell.rendered_percent()});
                md_row.push_back(cell.unions ? std::to_string(cell.intersection) + " (" +
                                                   cell.rendered_percent() + ")"
                                             : "");
            }
        }
        md_row.push_back(std::to_string(kway_intersection(table_ptrs, code, in.taxonomy)));
        md_rows.push_back(std::move(md_row));
    }

    auto md_out = open_out(cfg.output_dir / "agreement.md");
    write_markdown_table(md_out, header, md_rows);
    return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
    const Inputs in = load_inputs(cfg);

    bool any_truth = false;
    for (const auto& fp : in.footprints)
        if (fp.authoritative_class) any_truth = true;
    if (!any_truth)
        throw ParseError("evaluate: no footprint carries an authoritative class; "
                         "check the class property in " + cfg.footprints.string());

    const std::vector<LabelTable> tables = build_all_tables(in, cfg.radius);

    std::filesystem::create_directories(cfg.output_dir);
    for (const auto& table : tables) {
        const std::vector<EvaluationRow> rows =
            evaluate(table, in.footprints, in.authx, in.taxonomy);

        auto csv_out =
            open_out(cfg.output_dir / ("evaluation_" + table.source.name + ".csv"));
        csv::write_row(csv_out,
                       {"class", "truth_count", "labeled", "correct", "precision", "recall"});
        std::vector<std::vector<std::string>> md_rows;
        for (const auto& row : rows) {
            csv::write_row(csv_out, {row.class_name, std::to_string(row.truth_count),
                                     std::to_string(row.labeled), std::to_string(row.correct),
                                     row.rendered_precision(), row.rendered_recall()});
            md_rows.push_back({row.class_name, std::to_string(row.truth_count),
                               row.labeled ? std::to_string(row.correct) + "/" +
                                                 std::to_string(row.labeled)
                                           : "",
                               row.rendered_precision(), row.rendered_recall()});
        }
        auto md_out = open_out(cfg.output_dir / ("evaluation_" + table.source.name + ".md"));
        write_markdown_table(md_out, {"Class", "Truth", "Correct/Labeled", "Precision", "Recall"},
                             md_rows);
    }
    return 0;
}

int cmd_synth(const SynthConfig& cfg) {
    const LbcsTaxonomy taxonomy =
        with_file(cfg.taxonomy, [](std::istream& s) { return LbcsTaxonomy::load(s); });
    const AuthoritativeCrosswalk authx = with_file(
        cfg.authoritative_crosswalk,
        [&](std::istream& s) { return AuthoritativeCrosswalk::load(s, taxonomy); });

    CrosswalkTable merged;
    for (const auto& noise : cfg.params.sources) {
        const auto it = cfg.crosswalks.find(noise.source.name);
        if (it == cfg.crosswalks.end())
            throw ConfigError("synth: no crosswalk for source '" + noise.source.name + "'");
        const CrosswalkTable one = with_file(it->second, [&](std::istream& s) {
            return CrosswalkTable::load(s, taxonomy);
        });
        merged.merge(one);
    }

    const SynthOutput out = generate(cfg.params, taxonomy, merged, authx);
    write_fixture(out, cfg.params, cfg.output_dir);

    std::size_t records = 0;
    for (const auto& [source, recs] : out.records) records += recs.size();
    log_info("synth: wrote " + std::to_string(out.footprints.size()) + " parcels and " +
             std::to_string(records) + " records to " + cfg.output_dir.string());
    return 0;
}

}  // namespace parcelfuse
