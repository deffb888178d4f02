#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "parcelfuse/commands.hpp"
#include "parcelfuse/errors.hpp"
#include "parcelfuse/log.hpp"

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<double> radius;
    std::vector<std::string> sources;
    std::vector<int> classes;
};

void add_common(CLI::App* sub, Options& opt, bool with_sources, bool with_classes) {
    sub->add_option("--config", opt.config, "run configuration file")->required();
    sub->add_option("--out", opt.out, "output directory (overrides the config)");
    sub->add_option("--radius", opt.radius, "nearest-footprint search radius in meters");
    if (with_sources)
        sub->add_option("--sources", opt.sources, "only process these sources")->delimiter(',');
    if (with_classes)
        sub->add_option("--classes", opt.classes, "only report these LBCS codes")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parcel land-use labeling, agreement, and evaluation toolkit"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* validate = app.add_subcommand("validate", "per-source record-flow statistics");
    add_common(validate, opt, true, false);
    CLI::App* assign = app.add_subcommand("assign", "label parcels from source records");
    add_common(assign, opt, true, false);
    CLI::App* agree = app.add_subcommand("agree", "inter-source agreement per class");
    add_common(agree, opt, true, true);
    CLI::App* evaluate =
        app.add_subcommand("evaluate", "precision/recall against authoritative classes");
    add_common(evaluate, opt, true, false);
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic fixture");
    synth->add_option("--config", opt.config, "synthesis parameter file")->required();
    synth->add_option("--out", opt.out, "output directory (overrides the config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) {
            parcelfuse::SynthConfig cfg = parcelfuse::SynthConfig::load(opt.config);
            if (!opt.out.empty()) cfg.output_dir = opt.out;
            return parcelfuse::cmd_synth(cfg);
        }

        parcelfuse::RunConfig cfg = parcelfuse::RunConfig::load(opt.config);
        if (!opt.out.empty()) cfg.output_dir = opt.out;
        if (opt.radius) {
            if (*opt.radius < 0.0)
                throw parcelfuse::ConfigError("--radius must be >= 0");
            cfg.radius = *opt.radius;
        }
        cfg = parcelfuse::with_sources(std::move(cfg), opt.sources);

        if (validate->parsed()) return parcelfuse::cmd_validate(cfg);
        if (assign->parsed()) return parcelfuse::cmd_assign(cfg);
        if (agree->parsed()) return parcelfuse::cmd_agree(cfg, opt.classes);
        if (evaluate->parsed()) return parcelfuse::cmd_evaluate(cfg);
        return 1;
    } catch (const parcelfuse::ConfigError& e) {
        parcelfuse::log_error(e.what());
        return 1;
    } catch (const parcelfuse::ParseError& e) {
        parcelfuse::log_error(e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        parcelfuse::log_error(e.what());
        return 2;
    } catch (const std::exception& e) {
        parcelfuse::log_error(e.what());
        return 1;
    }
}
