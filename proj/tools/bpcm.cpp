// bpcm: change management for BPMN process models. Typed diffs, invertible
// patches, an append-only journal with provenance and audit, and ontology
// export. Exit codes: 0 success, 1 usage, 2 I/O, 3 parse, 4 conflict,
// 5 audit findings. Set BPCM_NOW (RFC 3339 UTC) to pin the clock for
// reproducible output.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "bpcm/bpmn_io.hpp"
#include "bpcm/diff.hpp"
#include "bpcm/errors.hpp"
#include "bpcm/journal.hpp"
#include "bpcm/ontology.hpp"
#include "bpcm/patch.hpp"
#include "bpcm/record_json.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kIo = 2;
constexpr int kParse = 3;
constexpr int kConflict = 4;
constexpr int kAudit = 5;

struct IoFailure {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoFailure{"cannot read '" + path + "'"};
    }
    std::ostringstream out;
    out << in.rdbuf();
    return std::move(out).str();
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoFailure{"cannot write '" + out_path + "'"};
    }
    out << content;
    if (!out.flush()) {
        throw IoFailure{"cannot write '" + out_path + "'"};
    }
}

std::string display_category(bpcm::ChangeCategory category,
                             const std::optional<bpcm::NodeKind>& task_kind) {
    std::string out;
    switch (category) {
        case bpcm::ChangeCategory::Declaration: out = "DeclarationChange"; break;
        case bpcm::ChangeCategory::ProcessInitialization:
            out = "ProcessInitializationChange";
            break;
        case bpcm::ChangeCategory::SequenceFlow: out = "SequenceFlowChange"; break;
        case bpcm::ChangeCategory::TaskLevel: out = "TaskLevelChange"; break;
        case bpcm::ChangeCategory::CustomExtension: out = "CustomExtensionChange"; break;
        case bpcm::ChangeCategory::DataObject: out = "DataObjectChange"; break;
        case bpcm::ChangeCategory::Gateways: out = "GatewaysChange"; break;
        case bpcm::ChangeCategory::TransactionConcurrency:
            out = "TransactionConcurrencyChange";
            break;
        case bpcm::ChangeCategory::Event: out = "EventChange"; break;
    }
    if (task_kind) {
        out += "/";
        out += std::string(bpcm::to_string(*task_kind));
    }
    return out;
}

struct DiffArgs {
    std::string old_file;
    std::string new_file;
    std::string agent;
    std::string cause;
    std::string description;
    std::string out;
};

int run_diff(const DiffArgs& args) {
    bpcm::DiffRequest request;
    request.old_model = bpcm::parse_bpmn(read_file(args.old_file));
    request.new_model = bpcm::parse_bpmn(read_file(args.new_file));
    request.provenance = {args.agent, args.cause, args.description};
    request.clock = bpcm::clock_from_env();
    const bpcm::ChangeSet set = bpcm::diff(request);
    write_output(args.out, bpcm::change_set_to_line(set) + "\n");
    std::cerr << set.records.size() << " record(s)\n";
    return kOk;
}

struct ApplyArgs {
    std::string set_file;
    std::string model_file;
    std::string out;
};

int run_apply(const ApplyArgs& args) {
    const bpcm::ChangeSet set = bpcm::change_set_from_text(read_file(args.set_file));
    const bpcm::ProcessModel model = bpcm::parse_bpmn(read_file(args.model_file));
    const bpcm::ProcessModel patched = bpcm::apply(set, model);
    write_output(args.out, bpcm::serialize_bpmn(patched));
    return kOk;
}

struct InvertArgs {
    std::string set_file;
    std::string out;
};

int run_invert(const InvertArgs& args) {
    const bpcm::ChangeSet set = bpcm::change_set_from_text(read_file(args.set_file));
    bpcm::InvertOptions options;
    options.clock = bpcm::clock_from_env();
    const bpcm::ChangeSet inverse = bpcm::invert(set, options);
    write_output(args.out, bpcm::change_set_to_line(inverse) + "\n");
    return kOk;
}

int run_journal_init(const std::string& dir, const std::string& baseline_file,
                     const std::vector<std::string>& acl_entries,
                     const std::string& acl_file) {
    std::set<std::string> acl(acl_entries.begin(), acl_entries.end());
    if (!acl_file.empty()) {
        std::istringstream in(read_file(acl_file));
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) {
                acl.insert(line);
            }
        }
    }
    const bpcm::ProcessModel baseline = bpcm::parse_bpmn(read_file(baseline_file));
    bpcm::Journal::init(dir, baseline, acl);
    std::cout << "initialized journal at " << dir << " (head v0)\n";
    return kOk;
}

int run_journal_commit(const std::string& dir, const std::string& set_file) {
    bpcm::Journal journal = bpcm::Journal::open(dir);
    const bpcm::ChangeSet set = bpcm::change_set_from_text(read_file(set_file));
    journal.commit(set, bpcm::clock_from_env());
    std::cout << "committed " << journal.entries().back().set.set_id << " as "
              << journal.head_version() << "\n";
    return kOk;
}

int run_journal_log(const std::string& dir) {
    const bpcm::Journal journal = bpcm::Journal::open(dir);
    for (const auto& row : journal.log()) {
        std::cout << row.version << "\t" << row.set_id << "\t" << row.agent << "\t"
                  << row.cause << "\t" << row.committed_at.to_string() << "\t"
                  << row.record_count << "\n";
    }
    return kOk;
}

int run_journal_show(const std::string& dir, const std::string& tag,
                     const std::string& out) {
    const bpcm::Journal journal = bpcm::Journal::open(dir);
    const std::string effective = tag.empty() ? journal.head_version() : tag;
    write_output(out, bpcm::serialize_bpmn(journal.version(effective)));
    return kOk;
}

int run_journal_trace(const std::string& dir, const std::string& element_id) {
    const bpcm::Journal journal = bpcm::Journal::open(dir);
    const bpcm::TraceResult result = journal.trace(element_id);
    for (const auto& hit : result.hits) {
        std::cout << hit.version << "\t" << hit.record_id << "\t"
                  << display_category(hit.category, hit.task_kind) << "\t"
                  << hit.provenance.agent_name << "\t" << hit.provenance.cause << "\t"
                  << hit.timestamp.to_string() << "\n";
    }
    std::cerr << result.hits.size() << " hit(s) for '" << element_id << "'\n";
    return kOk;
}

int run_journal_verify(const std::string& dir) {
    const bpcm::Journal journal = bpcm::Journal::open(dir);
    const auto findings = journal.verify();
    for (const auto& finding : findings) {
        std::cout << bpcm::to_string(finding.kind) << "\t" << finding.subject << "\t"
                  << finding.detail << "\n";
    }
    if (findings.empty()) {
        std::cout << "no findings\n";
        return kOk;
    }
    return kAudit;
}

struct RevertArgs {
    std::string dir;
    std::string to;
    std::string agent;
    std::string cause;
    std::string description;
};

int run_journal_revert(const RevertArgs& args) {
    bpcm::Journal journal = bpcm::Journal::open(args.dir);
    journal.revert_to(args.to, {args.agent, args.cause, args.description},
                      bpcm::clock_from_env());
    std::cout << "reverted to " << args.to << "; head is " << journal.head_version() << "\n";
    return kOk;
}

int run_journal_export(const std::string& dir, const std::string& out) {
    const bpcm::Journal journal = bpcm::Journal::open(dir);
    write_output(out, bpcm::export_journal(journal));
    return kOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Change management for BPMN 2.0 process models"};
    app.require_subcommand(1);

    DiffArgs diff_args;
    auto* diff_cmd = app.add_subcommand("diff", "Diff two BPMN files into a change set");
    diff_cmd->add_option("old", diff_args.old_file, "Old BPMN file")->required();
    diff_cmd->add_option("new", diff_args.new_file, "New BPMN file")->required();
    diff_cmd->add_option("--agent", diff_args.agent, "Agent making the change")->required();
    diff_cmd->add_option("--cause", diff_args.cause, "Cause of the change")->required();
    diff_cmd->add_option("--desc", diff_args.description, "Free-text description");
    diff_cmd->add_option("--out", diff_args.out, "Output file (default stdout)");

    ApplyArgs apply_args;
    auto* apply_cmd = app.add_subcommand("apply", "Apply a change set to a BPMN file");
    apply_cmd->add_option("set", apply_args.set_file, "Change-set file")->required();
    apply_cmd->add_option("model", apply_args.model_file, "BPMN file")->required();
    apply_cmd->add_option("--out", apply_args.out, "Output file (default stdout)");

    InvertArgs invert_args;
    auto* invert_cmd = app.add_subcommand("invert", "Invert a change set");
    invert_cmd->add_option("set", invert_args.set_file, "Change-set file")->required();
    invert_cmd->add_option("--out", invert_args.out, "Output file (default stdout)");

    auto* journal_cmd = app.add_subcommand("journal", "Journal operations");
    journal_cmd->require_subcommand(1);

    std::string init_dir, init_baseline, init_acl_file;
    std::vector<std::string> init_acl;
    auto* init_cmd = journal_cmd->add_subcommand("init", "Create a journal directory");
    init_cmd->add_option("dir", init_dir, "Journal directory")->required();
    init_cmd->add_option("--baseline", init_baseline, "Baseline BPMN file")->required();
    init_cmd->add_option("--acl", init_acl, "Authorized agent names")->delimiter(',');
    init_cmd->add_option("--acl-file", init_acl_file, "File with one agent per line");

    std::string commit_dir, commit_set;
    auto* commit_cmd = journal_cmd->add_subcommand("commit", "Commit a change-set file");
    commit_cmd->add_option("dir", commit_dir, "Journal directory")->required();
    commit_cmd->add_option("set", commit_set, "Change-set file")->required();

    std::string log_dir;
    auto* log_cmd = journal_cmd->add_subcommand("log", "List committed entries");
    log_cmd->add_option("dir", log_dir, "Journal directory")->required();

    std::string show_dir, show_version, show_out;
    auto* show_cmd = journal_cmd->add_subcommand("show", "Print a version's BPMN");
    show_cmd->add_option("dir", show_dir, "Journal directory")->required();
    show_cmd->add_option("--version", show_version, "Version tag (default head)");
    show_cmd->add_option("--out", show_out, "Output file (default stdout)");

    std::string trace_dir, trace_element;
    auto* trace_cmd = journal_cmd->add_subcommand("trace", "Trace changes to an element");
    trace_cmd->add_option("dir", trace_dir, "Journal directory")->required();
    trace_cmd->add_option("element", trace_element, "Element id")->required();

    std::string verify_dir;
    auto* verify_cmd = journal_cmd->add_subcommand("verify", "Audit the journal");
    verify_cmd->add_option("dir", verify_dir, "Journal directory")->required();

    RevertArgs revert_args;
    auto* revert_cmd = journal_cmd->add_subcommand("revert", "Revert to an older version");
    revert_cmd->add_option("dir", revert_args.dir, "Journal directory")->required();
    revert_cmd->add_option("--to", revert_args.to, "Version tag to restore")->required();
    revert_cmd->add_option("--agent", revert_args.agent, "Agent reverting")->required();
    revert_cmd->add_option("--cause", revert_args.cause, "Cause of the revert")->required();
    revert_cmd->add_option("--desc", revert_args.description, "Free-text description");

    std::string export_dir, export_out;
    auto* export_cmd = journal_cmd->add_subcommand("export", "Export records as N-Triples");
    export_cmd->add_option("dir", export_dir, "Journal directory")->required();
    export_cmd->add_option("--out", export_out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        std::cout << app.help();
        return kOk;
    } catch (const CLI::ParseError& error) {
        std::cerr << "usage error: " << error.what() << "\n";
        return kUsage;
    }

    if (diff_cmd->parsed()) return run_diff(diff_args);
    if (apply_cmd->parsed()) return run_apply(apply_args);
    if (invert_cmd->parsed()) return run_invert(invert_args);
    if (init_cmd->parsed()) {
        return run_journal_init(init_dir, init_baseline, init_acl, init_acl_file);
    }
    if (commit_cmd->parsed()) return run_journal_commit(commit_dir, commit_set);
    if (log_cmd->parsed()) return run_journal_log(log_dir);
    if (show_cmd->parsed()) return run_journal_show(show_dir, show_version, show_out);
    if (trace_cmd->parsed()) return run_journal_trace(trace_dir, trace_element);
    if (verify_cmd->parsed()) return run_journal_verify(verify_dir);
    if (revert_cmd->parsed()) return run_journal_revert(revert_args);
    if (export_cmd->parsed()) return run_journal_export(export_dir, export_out);

    std::cerr << "usage error: no command\n";
    return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const IoFailure& failure) {
        std::cerr << "io error: " << failure.message << "\n";
        return kIo;
    } catch (const bpcm::ParseError& error) {
        std::cerr << "parse error: " << error.what() << "\n";
        return kParse;
    } catch (const bpcm::CodecError& error) {
        std::cerr << "parse error: " << error.what() << "\n";
        return kParse;
    } catch (const bpcm::InvalidModelError& error) {
        std::cerr << "parse error: " << error.what() << "\n";
        return kParse;
    } catch (const bpcm::ConflictError& error) {
        std::cerr << "conflict: " << error.what() << "\n";
        return kConflict;
    } catch (const bpcm::VersionChainError& error) {
        std::cerr << "conflict: " << error.what() << "\n";
        return kConflict;
    } catch (const bpcm::JournalError& error) {
        switch (error.kind()) {
            case bpcm::JournalErrorKind::VersionMismatch:
                std::cerr << "conflict: " << error.what() << "\n";
                return kConflict;
            case bpcm::JournalErrorKind::UnknownVersion:
            case bpcm::JournalErrorKind::NothingToRevert:
                std::cerr << "usage error: " << error.what() << "\n";
                return kUsage;
            case bpcm::JournalErrorKind::CorruptJournal:
                std::cerr << "audit: " << error.what() << "\n";
                return kAudit;
            case bpcm::JournalErrorKind::Io:
                std::cerr << "io error: " << error.what() << "\n";
                return kIo;
        }
        std::cerr << error.what() << "\n";
        return kIo;
    } catch (const bpcm::Error& error) {
        std::cerr << "usage error: " << error.what() << "\n";
        return kUsage;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kIo;
    }
}
