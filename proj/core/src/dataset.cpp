#include "srx/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "srx/image.hpp"

namespace srx {

namespace {

using nlohmann::json;

json entry_to_json(const ManifestEntry& e) {
    json j{{"id", e.id},
           {"split", e.split},
           {"night_lr", e.night_lr},
           {"night_hr_gt", e.night_hr_gt},
           {"day_hr_gt", e.day_hr_gt}};
    if (!e.intermediate.empty())
        j["intermediate"] = e.intermediate;
    if (!e.output.empty())
        j["output"] = e.output;
    return j;
}

ManifestEntry entry_from_json(const json& j) {
    ManifestEntry e;
    e.id = j.at("id").get<std::string>();
    e.split = j.at("split").get<std::string>();
    e.night_lr = j.at("night_lr").get<std::string>();
    e.night_hr_gt = j.at("night_hr_gt").get<std::string>();
    e.day_hr_gt = j.at("day_hr_gt").get<std::string>();
    e.intermediate = j.value("intermediate", "");
    e.output = j.value("output", "");
    return e;
}

} // namespace

std::array<std::size_t, 3> split_sizes(std::size_t total,
                                       const std::array<double, 3>& fractions) {
    const double sum = fractions[0] + fractions[1] + fractions[2];
    if (std::abs(sum - 1.0) > 1e-9)
        throw ParseError("split fractions must sum to 1");
    const auto n_val = static_cast<std::size_t>(std::floor(fractions[1] * total));
    const auto n_test = static_cast<std::size_t>(std::floor(fractions[2] * total));
    return {total - n_val - n_test, n_val, n_test};
}

std::vector<std::string> assign_splits(const std::vector<std::string>& ids,
                                       const std::array<double, 3>& fractions,
                                       std::uint64_t seed) {
    std::vector<std::size_t> order(ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto sizes = split_sizes(ids.size(), fractions);
    std::vector<std::string> result(ids.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const char* split = pos < sizes[0]                ? "train"
                            : pos < sizes[0] + sizes[1]   ? "val"
                                                          : "test";
        result[order[pos]] = split;
    }
    return result;
}

std::vector<ManifestEntry> prepare(const std::filesystem::path& src_dir,
                                   const std::filesystem::path& out_dir,
                                   const DatasetConfig& cfg) {
    namespace fs = std::filesystem;
    if (cfg.hr_size != cfg.lr_size * cfg.zoom)
        throw ParseError("hr_size must equal lr_size * zoom");

    std::vector<fs::path> sources;
    if (fs::exists(src_dir))
        for (const auto& de : fs::directory_iterator(src_dir))
            if (de.is_regular_file() && de.path().extension() == ".png")
                sources.push_back(de.path());
    if (sources.empty())
        throw EmptySource("no PNG pairs found in " + src_dir.string());
    std::sort(sources.begin(), sources.end());

    std::vector<std::string> ids;
    ids.reserve(sources.size());
    for (const auto& p : sources)
        ids.push_back(p.stem().string());
    const std::vector<std::string> splits = assign_splits(ids, cfg.split_fractions, cfg.seed);

    for (const char* split : {"train", "val", "test"})
        for (const char* role : {"night_lr", "night_hr_gt", "day_hr_gt"})
            fs::create_directories(out_dir / split / role);

    std::vector<ManifestEntry> entries;
    entries.reserve(sources.size());
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const Image pair = load_image(sources[i]);
        if (pair.height != cfg.hr_size || pair.width != 2 * cfg.hr_size)
            throw BadPairDimensions(sources[i].string() + ": expected " +
                                    std::to_string(cfg.hr_size) + "x" +
                                    std::to_string(2 * cfg.hr_size));
        auto [left, right] = split_pair(pair);
        const Image& day = cfg.day_left ? left : right;
        const Image& night = cfg.day_left ? right : left;
        const Image night_lr = resize_bilinear(night, cfg.lr_size, cfg.lr_size);

        ManifestEntry e;
        e.id = ids[i];
        e.split = splits[i];
        const std::string file = e.id + ".png";
        e.night_lr = e.split + "/night_lr/" + file;
        e.night_hr_gt = e.split + "/night_hr_gt/" + file;
        e.day_hr_gt = e.split + "/day_hr_gt/" + file;
        save_image(night_lr, out_dir / e.night_lr);
        save_image(night, out_dir / e.night_hr_gt);
        save_image(day, out_dir / e.day_hr_gt);
        entries.push_back(std::move(e));
    }

    std::sort(entries.begin(), entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
    write_manifest(entries, out_dir / "manifest.jsonl");
    return entries;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw FileNotFound("cannot open manifest " + path.string());
    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        try {
            entries.push_back(entry_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return entries;
}

void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write manifest " + path.string());
    for (const auto& e : entries)
        out << entry_to_json(e).dump() << '\n';
}

std::vector<Violation> validate_manifest(const std::filesystem::path& path, int zoom) {
    namespace fs = std::filesystem;
    const std::vector<ManifestEntry> entries = read_manifest(path);
    const fs::path base = path.parent_path();

    std::vector<Violation> violations;
    std::set<std::string> seen;
    for (const auto& e : entries) {
        if (!seen.insert(e.id).second)
            violations.push_back({e.id, "DuplicateId", "id appears more than once"});

        bool files_ok = true;
        for (const std::string* rel : {&e.night_lr, &e.night_hr_gt, &e.day_hr_gt}) {
            if (!fs::exists(base / *rel)) {
                violations.push_back({e.id, "MissingFile", *rel});
                files_ok = false;
            }
        }
        if (!files_ok)
            continue;

        const Image lr = load_image(base / e.night_lr);
        const Image hr = load_image(base / e.night_hr_gt);
        if (lr.height * zoom != hr.height || lr.width * zoom != hr.width)
            violations.push_back(
                {e.id, "DimensionMismatch",
                 std::to_string(lr.width) + "x" + std::to_string(lr.height) + " * zoom " +
                     std::to_string(zoom) + " != " + std::to_string(hr.width) + "x" +
                     std::to_string(hr.height)});
    }
    return violations;
}

} // namespace srx
