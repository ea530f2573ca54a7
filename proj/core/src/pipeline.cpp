#include "srx/pipeline.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace srx {

namespace fs = std::filesystem;

StageSpec null_sr_stage() {
    return {"null-sr", "builtin:nearest", StageKind::super_resolution, 4};
}

StageSpec null_translation_stage() {
    return {"null-translate", "builtin:copy", StageKind::translation, 1};
}

namespace {

std::vector<fs::path> list_pngs(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& de : fs::directory_iterator(dir))
        if (de.is_regular_file() && de.path().extension() == ".png")
            files.push_back(de.path());
    std::sort(files.begin(), files.end());
    return files;
}

void run_builtin(const StageSpec& stage, const fs::path& in_dir, const fs::path& out_dir) {
    for (const auto& in : list_pngs(in_dir)) {
        const fs::path out = out_dir / in.filename();
        if (stage.command == "builtin:copy") {
            fs::copy_file(in, out, fs::copy_options::overwrite_existing);
        } else { // builtin:nearest
            const Image img = load_image(in);
            save_image(resize_nearest(img, img.height * stage.output_scale,
                                      img.width * stage.output_scale),
                       out);
        }
    }
}

void run_subprocess(const StageSpec& stage, const fs::path& in_dir, const fs::path& out_dir) {
    std::vector<std::string> args;
    std::stringstream ss(stage.command);
    std::string tok;
    while (ss >> tok)
        args.push_back(tok);
    args.insert(args.end(), {"--input", in_dir.string(), "--output", out_dir.string()});

    std::vector<char*> argv;
    for (auto& a : args)
        argv.push_back(a.data());
    argv.push_back(nullptr);

    const pid_t pid = fork();
    if (pid < 0)
        throw StageCrashed("fork failed for stage " + stage.name);
    if (pid == 0) {
        setenv("SRX_SCALE", std::to_string(stage.output_scale).c_str(), 1);
        execvp(argv[0], argv.data());
        _exit(127);
    }
    int status = 0;
    waitpid(pid, &status, 0);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
        throw StageCrashed("stage " + stage.name + " (" + stage.command + ") exited with " +
                           std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1));
}

void validate_outputs(const StageSpec& stage, const fs::path& in_dir, const fs::path& out_dir) {
    for (const auto& in : list_pngs(in_dir)) {
        const fs::path out = out_dir / in.filename();
        if (!fs::exists(out))
            throw MissingOutput("stage " + stage.name + " did not produce " + out.string());
        const Image src = load_image(in);
        const Image dst = load_image(out);
        if (dst.height != src.height * stage.output_scale ||
            dst.width != src.width * stage.output_scale)
            throw WrongOutputScale("stage " + stage.name + ": " + out.filename().string() +
                                   " is " + std::to_string(dst.width) + "x" +
                                   std::to_string(dst.height) + ", expected scale " +
                                   std::to_string(stage.output_scale));
    }
}

} // namespace

void run_stage(const StageSpec& stage, const fs::path& in_dir, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    if (stage.command.rfind("builtin:", 0) == 0)
        run_builtin(stage, in_dir, out_dir);
    else
        run_subprocess(stage, in_dir, out_dir);
    validate_outputs(stage, in_dir, out_dir);
}

std::vector<ManifestEntry> run_topology(TopologyId topology,
                                        const fs::path& manifest_path,
                                        const StageSpec& sr,
                                        const StageSpec& translation,
                                        const fs::path& work_dir,
                                        const std::string& split) {
    std::vector<ManifestEntry> entries = read_manifest(manifest_path);
    if (!split.empty() && split != "all") {
        std::erase_if(entries, [&](const ManifestEntry& e) { return e.split != split; });
    }
    if (entries.empty())
        throw ManifestInvalid("no manifest entries for split '" + split + "'");

    const fs::path base = manifest_path.parent_path();
    const fs::path input_dir = work_dir / "input";
    const fs::path inter_dir = work_dir / "intermediate";
    const fs::path output_dir = work_dir / "output";
    fs::create_directories(input_dir);
    for (const auto& e : entries)
        fs::copy_file(base / e.night_lr, input_dir / (e.id + ".png"),
                      fs::copy_options::overwrite_existing);

    const StageSpec& first = (topology == TopologyId::M1) ? sr : translation;
    const StageSpec& second = (topology == TopologyId::M1) ? translation : sr;
    run_stage(first, input_dir, inter_dir);
    run_stage(second, inter_dir, output_dir);

    for (auto& e : entries) {
        e.intermediate = "intermediate/" + e.id + ".png";
        e.output = "output/" + e.id + ".png";
        // rebase ground-truth paths onto the augmented manifest's directory
        for (std::string* rel : {&e.night_lr, &e.night_hr_gt, &e.day_hr_gt})
            *rel = fs::relative(base / *rel, work_dir).string();
    }
    write_manifest(entries, work_dir / "manifest.jsonl");
    return entries;
}

std::vector<PhasePair> phase_pairs(PhaseId phase,
                                   TopologyId topology,
                                   const fs::path& augmented_manifest,
                                   bool enable_m2_intermediate) {
    if (phase == PhaseId::Intermediate && topology == TopologyId::M2 && !enable_m2_intermediate)
        throw PhaseUnavailable(
            "M2-Intermediate is disabled by default; pass --enable-m2-intermediate");

    const std::vector<ManifestEntry> entries = read_manifest(augmented_manifest);
    const fs::path base = augmented_manifest.parent_path();

    std::vector<PhasePair> pairs;
    pairs.reserve(entries.size());
    for (const auto& e : entries) {
        PhasePair p;
        p.id = e.id;
        p.reference = base / e.day_hr_gt;
        switch (phase) {
        case PhaseId::Pre:
            p.candidate = base / e.night_lr;
            p.upsample_to_reference = true;
            break;
        case PhaseId::Intermediate:
            if (e.intermediate.empty())
                throw ManifestInvalid("entry " + e.id + " has no intermediate image");
            p.candidate = base / e.intermediate;
            // M2's intermediate is LR and needs the Pre-phase upsample rule
            p.upsample_to_reference = (topology == TopologyId::M2);
            break;
        case PhaseId::Post:
            if (e.output.empty())
                throw ManifestInvalid("entry " + e.id + " has no output image");
            p.candidate = base / e.output;
            break;
        }
        pairs.push_back(std::move(p));
    }
    return pairs;
}

std::pair<Image, Image> load_phase_pair(const PhasePair& pair) {
    Image candidate = load_image(pair.candidate);
    const Image reference = load_image(pair.reference);
    if (pair.upsample_to_reference &&
        (candidate.height != reference.height || candidate.width != reference.width))
        candidate = resize_nearest(candidate, reference.height, reference.width);
    return {std::move(candidate), reference};
}

} // namespace srx
