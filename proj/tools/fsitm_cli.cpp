#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsitm/eval.hpp"
#include "fsitm/fixtures.hpp"
#include "fsitm/fsitm.hpp"
#include "fsitm/image_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;

// "n,w,m" -> nscale, min_wavelength, mult on top of the given defaults.
fsitm::FilterParams parse_params_triplet(const std::string& text, fsitm::FilterParams base) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        parts.push_back(text.substr(start, comma - start));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    if (parts.size() != 3) {
        throw fsitm::InvalidArgument(
            fmt::format("expected 'nscale,wlen,mult', got '{}'", text));
    }
    auto parse_double = [&](const std::string& s) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw fsitm::InvalidArgument(fmt::format("bad number '{}' in '{}'", s, text));
        }
        return v;
    };
    const double nscale = parse_double(parts[0]);
    if (nscale != std::floor(nscale)) {
        throw fsitm::InvalidArgument(fmt::format("nscale '{}' must be an integer", parts[0]));
    }
    base.nscale = static_cast<int>(nscale);
    base.min_wavelength = parse_double(parts[1]);
    base.mult = parse_double(parts[2]);
    base.validate();
    return base;
}

struct CommonFlags {
    std::string channel = "G";
    double alpha = 0.5;
    std::string hdr_params;
    std::string log_params;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--channel", flags.channel, "Channel to score: R, G, B or all")
        ->default_val("G");
    cmd->add_option("--alpha", flags.alpha,
                    "Blend weight of the raw-radiance reference, in [0,1]")
        ->default_val(0.5);
    cmd->add_option("--hdr-params", flags.hdr_params,
                    "Raw-radiance filter bank as nscale,wlen,mult (default 2,8,8)");
    cmd->add_option("--log-params", flags.log_params,
                    "Log/LDR filter bank as nscale,wlen,mult (default 2,2,2)");
}

// Validates every flag and assembles the config; throws before any I/O.
fsitm::FsitmConfig build_config(const CommonFlags& flags) {
    fsitm::FsitmConfig cfg;
    cfg.alpha = flags.alpha;
    if (!flags.hdr_params.empty()) {
        cfg.hdr_params = parse_params_triplet(flags.hdr_params, cfg.hdr_params);
    }
    if (!flags.log_params.empty()) {
        cfg.log_params = parse_params_triplet(flags.log_params, cfg.log_params);
    }
    cfg.validate();
    return cfg;
}

std::vector<fsitm::ChannelId> parse_channels(const std::string& channel) {
    if (channel == "all") {
        return {fsitm::ChannelId::R, fsitm::ChannelId::G, fsitm::ChannelId::B};
    }
    return {fsitm::parse_channel(channel)};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
        throw fsitm::IoError(fmt::format("cannot write '{}'", path.string()));
    }
}

struct ScoreArgs {
    std::string hdr_path;
    std::string ldr_path;
    CommonFlags common;
    std::optional<double> tmqi;
    std::string dump_prefix;
};

int cmd_score(const ScoreArgs& args) {
    const auto cfg = build_config(args.common);
    const auto channels = parse_channels(args.common.channel);
    if (args.tmqi && !(*args.tmqi >= 0.0 && *args.tmqi <= 1.0)) {
        throw fsitm::OutOfRangeInput(fmt::format("--tmqi {} outside [0, 1]", *args.tmqi));
    }
    if (!args.dump_prefix.empty() && channels.size() != 1) {
        throw fsitm::InvalidArgument("--dump-phase needs a single --channel");
    }

    const fsitm::HdrImage hdr = fsitm::load_hdr(args.hdr_path);
    const fsitm::LdrImage ldr = fsitm::load_ldr(args.ldr_path);

    double sum = 0.0;
    for (const auto c : channels) {
        const double score = fsitm::fsitm(hdr, ldr, c, cfg);
        sum += score;
        std::cout << fmt::format("FSITM^{} = {:.4f}\n", fsitm::to_string(c), score);
        if (args.tmqi) {
            std::cout << fmt::format("FSITM^{}_TMQI = {:.4f}\n", fsitm::to_string(c),
                                     fsitm::combine_with_tmqi(score, *args.tmqi));
        }
    }
    if (channels.size() > 1) {
        std::cout << fmt::format("FSITM^mean = {:.4f} (non-normative mean of R,G,B)\n",
                                 sum / static_cast<double>(channels.size()));
    }

    if (!args.dump_prefix.empty()) {
        const auto c = channels.front();
        const auto& h_c = fsitm::extract_channel(hdr, c);
        const auto log_h_c = fsitm::log_compress(h_c);
        const auto& l_c = fsitm::extract_channel(ldr, c);
        const std::string prefix = args.dump_prefix;
        fsitm::save_plane_pfm(prefix + ".ph_h.pfm", fsitm::lwmpa(h_c, cfg.hdr_params).values);
        fsitm::save_plane_pfm(prefix + ".ph_logh.pfm",
                              fsitm::lwmpa(log_h_c, cfg.log_params).values);
        fsitm::save_plane_pfm(prefix + ".ph_l.pfm", fsitm::lwmpa(l_c, cfg.log_params).values);
    }
    return kExitOk;
}

struct BatchArgs {
    std::string manifest_path;
    CommonFlags common;
    std::string out_path;
};

int cmd_batch(const BatchArgs& args) {
    const auto cfg = build_config(args.common);
    const auto channels = parse_channels(args.common.channel);

    const auto manifest = fsitm::read_manifest(args.manifest_path);
    std::string out = "hdr_path,ldr_path,channel,fsitm\n";
    for (const auto& entry : manifest.entries) {
        const fsitm::HdrImage hdr = fsitm::load_hdr(entry.hdr_path);
        const fsitm::LdrImage ldr = fsitm::load_ldr(entry.ldr_path);
        for (const auto c : channels) {
            out += fmt::format("{},{},{},{:.4f}\n", entry.hdr_path.string(),
                               entry.ldr_path.string(), fsitm::to_string(c),
                               fsitm::fsitm(hdr, ldr, c, cfg));
        }
    }
    if (args.out_path.empty()) {
        std::cout << out;
    } else {
        write_text_file(args.out_path, out);
    }
    return kExitOk;
}

struct EvalArgs {
    std::string manifest_path;
    CommonFlags common;
    std::string out_path;
    std::string format = "text";
};

int cmd_eval(const EvalArgs& args) {
    const auto cfg = build_config(args.common);
    if (args.common.channel == "all") {
        throw fsitm::InvalidArgument("eval needs a single --channel");
    }
    const auto channel = fsitm::parse_channel(args.common.channel);
    if (args.format != "json" && args.format != "text") {
        throw fsitm::InvalidArgument(
            fmt::format("--format must be json or text, got '{}'", args.format));
    }

    const auto manifest = fsitm::read_manifest(args.manifest_path);
    const auto metric = [&cfg](const fsitm::HdrImage& h, const fsitm::LdrImage& l,
                               fsitm::ChannelId c) { return fsitm::fsitm(h, l, c, cfg); };
    const auto report = fsitm::evaluate(manifest, metric, channel);
    const std::string text =
        args.format == "json" ? fsitm::report_to_json(report) : fsitm::report_to_text(report);
    if (args.out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(args.out_path, text);
    }
    return kExitOk;
}

struct FixturesArgs {
    std::string out_dir;
    std::vector<std::string> scenes{"gaussian_bump", "mixed_grid"};
    int size = 96;
    double dynamic_range = 1000.0;
    unsigned seed = 1;
    int levels = 6;
    std::string tmo = "gamma:2.2";
};

int cmd_fixtures(const FixturesArgs& args) {
    if (args.levels < 3 || args.levels > 8) {
        throw fsitm::InvalidArgument(
            fmt::format("--levels {} outside [3, 8]", args.levels));
    }
    std::vector<fsitm::SceneKind> kinds;
    for (const auto& name : args.scenes) {
        kinds.push_back(fsitm::parse_scene_kind(name));
    }
    const auto op = fsitm::parse_tone_map_op(args.tmo);

    std::filesystem::create_directories(args.out_dir);
    const std::filesystem::path dir = args.out_dir;
    std::string manifest = "hdr_path,ldr_path,rank\n";
    for (const auto kind : kinds) {
        fsitm::SyntheticScene scene{.kind = kind,
                                    .width = args.size,
                                    .height = args.size,
                                    .dynamic_range = args.dynamic_range,
                                    .seed = args.seed};
        const auto hdr = fsitm::render_scene(scene);
        const std::string stem{fsitm::to_string(kind)};
        fsitm::save_hdr_pfm(dir / (stem + ".pfm"), hdr);

        const auto ldr = fsitm::tone_map(hdr, op);
        for (int level = 0; level < args.levels; ++level) {
            const std::string name = fmt::format("{}_l{}.png", stem, level);
            fsitm::save_ldr_png(dir / name, fsitm::degrade(ldr, level));
            manifest += fmt::format("{}.pfm,{},{}\n", stem, name, level + 1);
        }
    }
    write_text_file(dir / "manifest.csv", manifest);
    std::cout << fmt::format("wrote {} scene(s) to {}\n", kinds.size(), dir.string());
    return kExitOk;
}

struct DumpPhaseArgs {
    std::string hdr_path;
    std::string ldr_path;
    std::string out_prefix;
    CommonFlags common;
};

int cmd_dump_phase(const DumpPhaseArgs& args) {
    const auto cfg = build_config(args.common);
    if (args.hdr_path.empty() == args.ldr_path.empty()) {
        throw fsitm::InvalidArgument("dump-phase needs exactly one of --hdr / --ldr");
    }
    if (args.common.channel == "all") {
        throw fsitm::InvalidArgument("dump-phase needs a single --channel");
    }
    const auto channel = fsitm::parse_channel(args.common.channel);

    if (!args.hdr_path.empty()) {
        const auto hdr = fsitm::load_hdr(args.hdr_path);
        const auto& h_c = fsitm::extract_channel(hdr, channel);
        fsitm::save_plane_pfm(args.out_prefix + ".ph_h.pfm",
                              fsitm::lwmpa(h_c, cfg.hdr_params).values);
        fsitm::save_plane_pfm(args.out_prefix + ".ph_logh.pfm",
                              fsitm::lwmpa(fsitm::log_compress(h_c), cfg.log_params).values);
    } else {
        const auto ldr = fsitm::load_ldr(args.ldr_path);
        fsitm::save_plane_pfm(args.out_prefix + ".ph_l.pfm",
                              fsitm::lwmpa(fsitm::extract_channel(ldr, channel),
                                           cfg.log_params).values);
    }
    return kExitOk;
}

bool is_validation_error(const fsitm::Error& e) {
    return dynamic_cast<const fsitm::InvalidArgument*>(&e) != nullptr ||
           dynamic_cast<const fsitm::OutOfRangeInput*>(&e) != nullptr ||
           dynamic_cast<const fsitm::LevelTooHigh*>(&e) != nullptr ||
           dynamic_cast<const fsitm::BankTooLarge*>(&e) != nullptr ||
           dynamic_cast<const fsitm::DimensionMismatch*>(&e) != nullptr;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-similarity scoring of tone-mapped images against HDR sources"};
    app.require_subcommand(1);

    ScoreArgs score_args;
    auto* score = app.add_subcommand("score", "Score one LDR rendition against its HDR source");
    score->add_option("--hdr", score_args.hdr_path, "HDR source (.hdr or .pfm)")->required();
    score->add_option("--ldr", score_args.ldr_path, "Tone-mapped rendition (.png)")->required();
    add_common_flags(score, score_args.common);
    score->add_option("--tmqi", score_args.tmqi,
                      "External TMQI score in [0,1]; prints the combined index too");
    score->add_option("--dump-phase", score_args.dump_prefix,
                      "Also write the three phase maps as <prefix>.ph_*.pfm");

    BatchArgs batch_args;
    auto* batch = app.add_subcommand("batch", "Score every pair in a manifest");
    batch->add_option("--manifest", batch_args.manifest_path,
                      "CSV with header hdr_path,ldr_path,rank (rank ignored)")
        ->required();
    add_common_flags(batch, batch_args.common);
    batch->add_option("--out", batch_args.out_path, "Output CSV path (default stdout)");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand(
        "eval", "Rank-correlation report of the metric against subjective ranks");
    eval->add_option("--manifest", eval_args.manifest_path,
                     "CSV with header hdr_path,ldr_path,rank")
        ->required();
    add_common_flags(eval, eval_args.common);
    eval->add_option("--format", eval_args.format, "Report format: json or text")
        ->default_val("text");
    eval->add_option("--out", eval_args.out_path, "Output path (default stdout)");

    FixturesArgs fixtures_args;
    auto* fixtures =
        app.add_subcommand("fixtures", "Write synthetic HDR scenes, degraded LDR ladders "
                                       "and a rank manifest");
    fixtures->add_option("--out", fixtures_args.out_dir, "Output directory")->required();
    fixtures->add_option("--scenes", fixtures_args.scenes,
                         "Scene kinds (gaussian_bump step_edge bright_line dark_line "
                         "mixed_grid)");
    fixtures->add_option("--size", fixtures_args.size, "Scene width and height")
        ->default_val(96);
    fixtures->add_option("--dynamic-range", fixtures_args.dynamic_range,
                         "Scene max/min radiance ratio")
        ->default_val(1000.0);
    fixtures->add_option("--seed", fixtures_args.seed, "Scene noise seed")->default_val(1);
    fixtures->add_option("--levels", fixtures_args.levels,
                         "Degradation ladder length (posterization levels 0..n-1)")
        ->default_val(6);
    fixtures->add_option("--tmo", fixtures_args.tmo,
                         "Tone-mapping operator: clip, gamma[:g], log_norm, reinhard_global")
        ->default_val("gamma:2.2");

    DumpPhaseArgs dump_args;
    auto* dump = app.add_subcommand("dump-phase", "Write mean-phase maps as grayscale PFMs");
    dump->add_option("--hdr", dump_args.hdr_path,
                     "HDR input; writes <prefix>.ph_h.pfm and <prefix>.ph_logh.pfm");
    dump->add_option("--ldr", dump_args.ldr_path, "LDR input; writes <prefix>.ph_l.pfm");
    dump->add_option("--out", dump_args.out_prefix, "Output path prefix")->required();
    add_common_flags(dump, dump_args.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the message to stderr
        return kExitValidation;
    }

    try {
        if (score->parsed()) {
            return cmd_score(score_args);
        }
        if (batch->parsed()) {
            return cmd_batch(batch_args);
        }
        if (eval->parsed()) {
            return cmd_eval(eval_args);
        }
        if (fixtures->parsed()) {
            return cmd_fixtures(fixtures_args);
        }
        if (dump->parsed()) {
            return cmd_dump_phase(dump_args);
        }
    } catch (const fsitm::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return is_validation_error(e) ? kExitValidation : kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitOk;
}
