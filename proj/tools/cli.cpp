#include "cli.hpp"

#include "subcollect/archive.hpp"
#include "subcollect/error.hpp"
#include "subcollect/evaluation.hpp"
#include "subcollect/extraction.hpp"
#include "subcollect/index.hpp"
#include "subcollect/manifest.hpp"
#include "subcollect/spec.hpp"
#include "subcollect/stats.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace subcollect::cli {

namespace {

namespace fs = std::filesystem;

/// Writes `content` through a temporary file so readers never see a partial file.
void write_file_atomically(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
}

int cmd_index(const std::vector<std::string>& warcs, const std::string& output, std::ostream& err) {
    if (warcs.empty()) {
        err << "index: no input WARC files\n";
        return kValidationError;
    }
    std::set<std::string> ids;
    for (const auto& w : warcs) {
        if (!ids.insert(fs::path(w).filename().string()).second) {
            err << "index: duplicate archive file name " << fs::path(w).filename() << '\n';
            return kValidationError;
        }
    }
    std::vector<IndexEntry> all;
    IngestResult totals;
    for (const auto& w : warcs) {
        IngestResult r = ingest_warc_file(w);
        totals.records += r.records;
        totals.skipped += r.skipped;
        totals.warnings += r.warnings;
        totals.bytes += r.bytes;
        std::move(r.entries.begin(), r.entries.end(), std::back_inserter(all));
    }
    const Index index(std::move(all));
    std::ostringstream text;
    write_index(index, text);
    write_file_atomically(output, text.str());
    err << "records=" << totals.records << " indexed=" << index.size() << " skipped=" << totals.skipped
        << " warnings=" << totals.warnings << " bytes=" << totals.bytes << '\n';
    return kSuccess;
}

int cmd_extract(const std::string& spec_path, const std::string& index_path, const std::string& archive_dir,
                const std::string& output, const std::string& export_path, unsigned workers, std::ostream& out,
                std::ostream& err) {
    const SubCollectionSpec spec = parse_spec_file(spec_path);
    const Index index = read_index_file(index_path);
    const Archive archive(archive_dir);
    ExtractOptions options;
    options.workers = workers;
    const SubCollection c = extract(archive, index, spec, options);
    write_manifest_file(c, output);
    if (!export_path.empty()) {
        std::ostringstream warc;
        export_warc(c, archive, warc);
        write_file_atomically(export_path, warc.str());
    }
    out << "candidates_scanned=" << c.counters.candidates_scanned << '\n'
        << "fetches=" << c.counters.fetches << '\n'
        << "closure_added=" << c.counters.closure_added << '\n'
        << "fetch_errors=" << c.counters.fetch_errors << '\n'
        << "size_removed=" << c.counters.size_removed << '\n'
        << "members=" << c.members.size() << '\n';
    if (c.members.empty()) {
        err << "extract: specification matched nothing\n";
        return kEmptyResult;
    }
    return kSuccess;
}

int cmd_evaluate(const std::string& manifest_path, const std::string& index_path, const std::string& archive_dir,
                 const std::string& truth_path, const std::string& spec_path, const std::string& output,
                 unsigned workers, std::ostream& out) {
    const Index index = read_index_file(index_path);
    const Manifest manifest = read_manifest_file(manifest_path);
    const std::vector<IndexEntry> members = resolve_manifest(manifest, index);
    const Archive archive(archive_dir);

    std::optional<TruthSet> truth;
    if (!truth_path.empty()) {
        truth = read_truth_file(truth_path);
        check_truth_against_index(*truth, index);
    }
    std::optional<SubCollectionSpec> spec;
    if (!spec_path.empty()) spec = parse_spec_file(spec_path);

    EvaluateOptions options;
    options.truth = truth ? &*truth : nullptr;
    options.spec = spec ? &*spec : nullptr;
    options.workers = workers;
    const EvaluationReport report = evaluate(members, index, archive, options);
    write_report_kv(report, out);
    if (!output.empty()) {
        std::ostringstream csv;
        write_report_csv(report, csv);
        write_file_atomically(output, csv.str());
    }
    return kSuccess;
}

int cmd_stats(const std::string& index_path, const std::string& archive_dir, std::uint64_t n, std::uint64_t seed,
              const std::string& output, std::string wide_output, unsigned workers, bool same_year, bool micro,
              std::ostream& err) {
    if (n == 0) {
        err << "stats: --sample-n must be positive\n";
        return kValidationError;
    }
    const Index index = read_index_file(index_path);
    const Archive archive(archive_dir);
    StatsOptions options;
    options.sample_n = n;
    options.seed = seed;
    options.workers = workers;
    options.containment.same_year = same_year;
    options.containment.micro_average = micro;
    const StatsReport report = compute_stats(index, archive, options);

    std::ostringstream long_csv, wide_csv;
    write_stats_long_csv(report, long_csv);
    write_stats_wide_csv(report, wide_csv);
    if (wide_output.empty()) wide_output = output + ".wide.csv";
    write_file_atomically(output, long_csv.str());
    write_file_atomically(wide_output, wide_csv.str());
    std::uint64_t sampled = 0;
    for (const auto& row : report.rows) sampled += row.sampled_pages;
    err << "sampled_pages=" << sampled << " fetch_errors=" << report.fetch_errors << '\n';
    return kSuccess;
}

int cmd_get(const std::string& index_path, const std::string& archive_dir, const std::string& url,
            const std::string& at, std::ostream& out, std::ostream& err) {
    if (!is_valid_timestamp14(at)) {
        err << "get: --at must be a 14-digit UTC timestamp\n";
        return kValidationError;
    }
    const Index index = read_index_file(index_path);
    const auto ref = index.lookup_nearest(url, at);
    if (!ref) {
        err << "get: no capture of " << url << '\n';
        return kEmptyResult;
    }
    const Archive archive(archive_dir);
    const Snapshot snap = archive.fetch(*ref);
    err << ref->canonical_url << ' ' << ref->timestamp14 << ' ' << ref->digest << ' ' << ref->file_id << ' '
        << ref->offset << ' ' << ref->length << '\n';
    out.write(snap.body.data(), static_cast<std::streamsize>(snap.body.size()));
    out.flush();
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Extract and evaluate topic- and event-focused sub-collections of web archives"};
    app.require_subcommand(1);

    std::vector<std::string> warcs;
    std::string spec_path, index_path, archive_dir, output, truth_path, manifest_path, export_path, wide_output, url,
        at;
    unsigned workers = 1;
    std::uint64_t sample_n = 40000, seed = 0;
    bool same_year = false, micro = false;

    auto* index_cmd = app.add_subcommand("index", "Build a capture index from WARC files");
    index_cmd->add_option("warcs", warcs, "WARC files");
    index_cmd->add_option("--output", output, "Index file to write")->required();

    auto* extract_cmd = app.add_subcommand("extract", "Extract a sub-collection");
    extract_cmd->add_option("--spec", spec_path, "Sub-collection specification (JSON)")->required();
    extract_cmd->add_option("--index", index_path, "Capture index")->required();
    extract_cmd->add_option("--archive-dir", archive_dir, "Directory holding the WARC files")->required();
    extract_cmd->add_option("--output", output, "Manifest file to write")->required();
    extract_cmd->add_option("--export-warc", export_path, "Also copy member records into this WARC file");
    extract_cmd->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

    auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate an extracted sub-collection");
    eval_cmd->add_option("--manifest", manifest_path, "Manifest produced by extract")->required();
    eval_cmd->add_option("--index", index_path, "Capture index")->required();
    eval_cmd->add_option("--archive-dir", archive_dir, "Directory holding the WARC files")->required();
    eval_cmd->add_option("--truth", truth_path, "Relevance judgements");
    eval_cmd->add_option("--spec", spec_path, "Spec whose metadata scopes define relevant outlinks");
    eval_cmd->add_option("--output", output, "CSV report to write");
    eval_cmd->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

    auto* stats_cmd = app.add_subcommand("stats", "Per-year archive statistics from a random sample");
    stats_cmd->add_option("--index", index_path, "Capture index")->required();
    stats_cmd->add_option("--archive-dir", archive_dir, "Directory holding the WARC files")->required();
    stats_cmd->add_option("--sample-n", sample_n, "Sample size")->capture_default_str();
    stats_cmd->add_option("--seed", seed, "Sampling seed")->capture_default_str();
    stats_cmd->add_option("--output", output, "Long-format CSV to write")->required();
    stats_cmd->add_option("--wide-output", wide_output, "Wide CSV to write (default: <output>.wide.csv)");
    stats_cmd->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    stats_cmd->add_flag("--same-year", same_year, "Only count link targets captured in the same year");
    stats_cmd->add_flag("--micro-average", micro, "Pool links across pages instead of averaging per page");

    auto* get_cmd = app.add_subcommand("get", "Print the capture of a URL nearest to a time");
    get_cmd->add_option("--index", index_path, "Capture index")->required();
    get_cmd->add_option("--archive-dir", archive_dir, "Directory holding the WARC files")->required();
    get_cmd->add_option("--url", url, "URL to look up")->required();
    get_cmd->add_option("--at", at, "Target time, YYYYMMDDhhmmss")->required();

    std::vector<std::string> argv_store{"subcollect"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kValidationError;
    }

    try {
        if (*index_cmd) return cmd_index(warcs, output, err);
        if (*extract_cmd)
            return cmd_extract(spec_path, index_path, archive_dir, output, export_path, workers, out, err);
        if (*eval_cmd)
            return cmd_evaluate(manifest_path, index_path, archive_dir, truth_path, spec_path, output, workers, out);
        if (*stats_cmd)
            return cmd_stats(index_path, archive_dir, sample_n, seed, output, wide_output, workers, same_year, micro,
                             err);
        if (*get_cmd) return cmd_get(index_path, archive_dir, url, at, out, err);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const CorruptionError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    }
    return kValidationError;
}

}  // namespace subcollect::cli
