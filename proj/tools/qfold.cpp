// Command-line driver: exact canonical-basis computations, folding
// verification, and KLR relation checks over Cartan datum files.
//
// Exit codes: 0 all checks green, 1 a mathematical assertion failed,
// 2 invalid input or IO problem, 3 internal error.

#include <CLI11.hpp>

#include "qfold/driver.hpp"

using namespace qfold;

namespace {

void add_common(CLI::App* cmd, RunConfig& cfg, bool needs_datum = true) {
    if (needs_datum)
        cmd->add_option("datum", cfg.datum_path, "datum JSON file")->required();
    cmd->add_option("--bound", cfg.bound, "height bound");
    cmd->add_option("--trunc", cfg.trunc, "truncation order floor (>= 8)");
    cmd->add_option("--weight", cfg.weight_spec, "single weight as label:mult,label:mult");
    cmd->add_option("--cache", cfg.cache_dir, "cache directory");
    cmd->add_option("--out", cfg.out_path, "output file (default stdout)");
    cmd->add_option("--jobs", cfg.jobs, "parallel workers");
    cmd->add_option("--ell", cfg.ell, "prime ell for the folding quotient");
    cmd->add_flag("--symmetric-klr", cfg.symmetric_klr, "symmetric KLR parameter mode");
}

int emit_error(const RunConfig& cfg, const std::string& kind, const std::string& message,
               int code) {
    json rep;
    rep["schema"] = "qfold.error/1";
    rep["error"] = {{"kind", kind}, {"message", message}};
    rep["exit"] = code;
    try {
        write_report(cfg, rep);
    } catch (...) {
        fprintf(stderr, "%s: %s\n", kind.c_str(), message.c_str());
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact canonical bases, foldings, and KLR checks"};
    app.require_subcommand(1);

    RunConfig cfg;

    auto* validate = app.add_subcommand("validate", "validate datum, sigma, KLR parameters");
    add_common(validate, cfg);
    auto* dim = app.add_subcommand("dim", "weight-space dimensions up to the bound");
    add_common(dim, cfg);
    auto* cb = app.add_subcommand("cb", "canonical bases with certification");
    add_common(cb, cfg);
    auto* crystal = app.add_subcommand("crystal", "crystal graph from the dual-basis axioms");
    add_common(crystal, cfg);
    auto* fold = app.add_subcommand("fold-verify", "folding isomorphism verification harness");
    add_common(fold, cfg);
    auto* klr = app.add_subcommand("klr-check", "KLR parameter and relation checks");
    add_common(klr, cfg);
    auto* gram = app.add_subcommand("gram", "Gram matrices and selected monomial bases");
    add_common(gram, cfg);
    auto* cachecmd = app.add_subcommand("cache", "list or purge the result cache");
    cachecmd->add_option("--cache", cfg.cache_dir, "cache directory")->required();
    cachecmd->add_option("--out", cfg.out_path, "output file (default stdout)");
    cachecmd->add_flag("--purge", cfg.purge, "remove all entries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        cfg.check();
        RunResult result;
        if (validate->parsed()) result = run_validate(cfg);
        else if (dim->parsed()) result = run_dim(cfg);
        else if (cb->parsed()) result = run_cb(cfg);
        else if (crystal->parsed()) result = run_crystal(cfg);
        else if (fold->parsed()) result = run_fold_verify(cfg);
        else if (klr->parsed()) result = run_klr_check(cfg);
        else if (gram->parsed()) result = run_gram(cfg);
        else if (cachecmd->parsed()) result = run_cache_cmd(cfg);
        write_report(cfg, result.report);
        return result.ok ? 0 : 1;
    } catch (const domain_error& e) {
        return emit_error(cfg, "invalid-input", e.what(), 2);
    } catch (const verify_error& e) {
        return emit_error(cfg, "verification-failure", e.what(), 1);
    } catch (const internal_error& e) {
        return emit_error(cfg, "internal-error", e.what(), 3);
    } catch (const std::exception& e) {
        return emit_error(cfg, "internal-error", e.what(), 3);
    }
}
