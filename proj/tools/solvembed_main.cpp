#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "solvembed/catalog.hpp"
#include "solvembed/curvature.hpp"
#include "solvembed/embed.hpp"
#include "solvembed/errors.hpp"
#include "solvembed/io.hpp"

namespace {

using solvembed::Mat;

const Eigen::IOFormat kMatFmt(12, 0, "  ", "\n", "  [ ", " ]");

struct CliState {
    // shared option storage across subcommands (only one runs per invocation)
    std::string file;
    std::string second_file;
    std::string output;
    std::string scale = "auto";
    std::string metric = "einstein";
    std::string show_name;
    bool embeddable = false;
    double tol_hom = -1.0;
    double tol_pullback = -1.0;
    double tol_margin = -1.0;

    solvembed::Tolerances tolerances() const {
        solvembed::Tolerances t = solvembed::Tolerances::defaults();
        if (tol_hom > 0.0) t.homomorphism = tol_hom;
        if (tol_pullback > 0.0) t.pullback = tol_pullback;
        if (tol_margin > 0.0) t.faithfulness = tol_margin;
        return t;
    }
};

void add_tol_flags(CLI::App* cmd, CliState& st) {
    cmd->add_option("--tol-hom", st.tol_hom, "bracket-residual tolerance");
    cmd->add_option("--tol-pullback", st.tol_pullback, "pullback-residual tolerance");
    cmd->add_option("--tol-margin", st.tol_margin, "faithfulness-margin tolerance");
}

int cmd_validate(const CliState& st) {
    const solvembed::ParsedAlgebra pa = solvembed::parse_algebra_file(st.file);
    const solvembed::ValidationReport vr = solvembed::validate_algebra(pa.alg);
    std::cout << "dimension            : " << pa.alg.dim() << "\n"
              << "jacobi residual      : " << solvembed::format_double(vr.jacobi_residual) << "\n"
              << "solvable             : " << (vr.solvable ? "yes" : "no")
              << " (derived length " << vr.derived_series_length << ")\n"
              << "completely solvable  : " << (vr.completely_solvable ? "yes" : "no") << "\n"
              << "nilpotent            : " << (vr.nilpotent ? "yes" : "no") << "\n";
    if (!pa.split.has_value()) {
        std::cout << "no split provided; structure conditions not checked\n";
        return 0;
    }
    const solvembed::ConditionsReport cr = solvembed::validate_split(pa.alg, *pa.split);
    std::cout << cr.summary() << "\n";
    return cr.all_passed() ? 0 : 1;
}

int cmd_embed(const CliState& st) {
    const solvembed::ParsedAlgebra pa = solvembed::parse_algebra_file(st.file);
    if (!pa.split.has_value()) {
        throw solvembed::SchemaError(
            "the input has no split; add \"split\": {\"a\": [...], \"n\": [...]}");
    }
    solvembed::EmbedOptions options;
    options.metric = solvembed::metric_kind_from_string(st.metric);
    options.tolerances = st.tolerances();
    if (st.scale != "auto") {
        char* end = nullptr;
        const double v = std::strtod(st.scale.c_str(), &end);
        if (end == st.scale.c_str() || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
            throw solvembed::SchemaError("--scale must be 'auto' or a positive number");
        }
        options.scale = v;
    }

    const solvembed::EmbedResult result = solvembed::embed(pa.alg, *pa.split, options);
    const nlohmann::json out = solvembed::serialize_embedding(result.rep, result.certificate);

    std::ostream& info = st.output.empty() ? std::cerr : std::cout;
    info << result.certificate.summary() << "\n";
    info << "scale plan: c = " << solvembed::format_double(result.plan.target_c)
         << ", stage parameters t =";
    for (double t : result.plan.stage_scales) info << " " << solvembed::format_double(t);
    info << "\nminimum feasible: abelian " << solvembed::format_double(result.plan.min_feasible_c)
         << ", stages " << solvembed::format_double(result.plan.min_feasible_t) << "\n";

    if (st.output.empty()) {
        std::cout << out.dump(2) << "\n";
    } else {
        std::ofstream os(st.output);
        if (!os) throw solvembed::ParseError("cannot open '" + st.output + "' for writing");
        os << out.dump(2) << "\n";
        info << "embedding written to " << st.output << "\n";
    }
    return result.certificate.accepted ? 0 : 1;
}

int cmd_verify(const CliState& st) {
    const solvembed::ParsedEmbedding emb = solvembed::parse_embedding_file(st.file);
    const solvembed::ParsedAlgebra pa = solvembed::parse_algebra_file(st.second_file);
    const solvembed::Representation rep = solvembed::embedding_to_representation(emb, pa.alg);
    const solvembed::Tolerances tols = st.tolerances();
    solvembed::EmbeddingCertificate cert = solvembed::certify(pa.alg, rep, emb.metric, tols);
    if (std::abs(emb.c - cert.achieved_c) > tols.pullback * (1.0 + std::abs(emb.c))) {
        cert.failures.push_back("declared scale " + solvembed::format_double(emb.c) +
                                " disagrees with the achieved scale " +
                                solvembed::format_double(cert.achieved_c));
        cert.accepted = false;
    }
    std::cout << cert.summary() << "\n";
    return cert.accepted ? 0 : 1;
}

int cmd_ricci(const CliState& st) {
    const solvembed::ParsedAlgebra pa = solvembed::parse_algebra_file(st.file);
    const solvembed::RicciData data = solvembed::ricci(pa.alg);
    std::cout << "Ricci operator in a gram-orthonormal frame:\n"
              << data.ricci.format(kMatFmt) << "\n";
    const auto [einstein, residual] = solvembed::einstein_check(pa.alg, 1e-8);
    if (einstein) {
        const double lambda = data.ricci.trace() / pa.alg.dim();
        std::cout << "Einstein: yes, lambda = " << solvembed::format_double(lambda) << "\n";
    } else {
        std::cout << "Einstein: no (residual " << solvembed::format_double(residual) << ")\n";
    }
    return 0;
}

int cmd_soliton(const CliState& st) {
    const solvembed::ParsedAlgebra pa = solvembed::parse_algebra_file(st.file);
    const solvembed::RicciData data = solvembed::soliton_data(pa.alg);
    const Mat& F = data.frame;
    const Mat D = F * (*data.soliton_derivation) * F.transpose() * pa.alg.gram();
    std::cout << "nilsoliton constant c = " << solvembed::format_double(*data.soliton_c) << "\n"
              << "derivation D (original basis coordinates):\n"
              << D.format(kMatFmt) << "\n";
    return 0;
}

int cmd_catalog_list() {
    for (const std::string& name : solvembed::catalog_names()) std::cout << name << "\n";
    return 0;
}

int cmd_catalog_show(const CliState& st) {
    const solvembed::CatalogEntry entry = solvembed::example(st.show_name);
    nlohmann::json j;
    if (st.embeddable) {
        const auto [alg, split] = entry.embeddable();
        j = solvembed::serialize_algebra(alg, split);
    } else {
        j = solvembed::serialize_algebra(entry.alg, entry.split);
    }
    if (st.output.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream os(st.output);
        if (!os) throw solvembed::ParseError("cannot open '" + st.output + "' for writing");
        os << j.dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"faithful isometric lower-triangular realizations of metric solvable Lie algebras"};
    app.require_subcommand(1);
    CliState st;

    CLI::App* validate = app.add_subcommand("validate", "check an algebra file and its split");
    validate->add_option("file", st.file, "algebra JSON file")->required();

    CLI::App* embed = app.add_subcommand("embed", "construct and certify an embedding");
    embed->add_option("file", st.file, "algebra JSON file (with split)")->required();
    embed->add_option("--scale", st.scale, "'auto' or a forced positive scale c = t");
    embed->add_option("--metric", st.metric, "einstein or frobenius")
        ->check(CLI::IsMember({"einstein", "frobenius"}));
    embed->add_option("-o,--output", st.output, "write the embedding JSON here");
    add_tol_flags(embed, st);

    CLI::App* verify = app.add_subcommand("verify", "re-certify an embedding file independently");
    verify->add_option("embedding", st.file, "embedding JSON file")->required();
    verify->add_option("algebra", st.second_file, "algebra JSON file")->required();
    add_tol_flags(verify, st);

    CLI::App* ricci = app.add_subcommand("ricci", "print the Ricci operator and Einstein verdict");
    ricci->add_option("file", st.file, "algebra JSON file")->required();

    CLI::App* soliton = app.add_subcommand("soliton", "nilsoliton constant and derivation");
    soliton->add_option("file", st.file, "nilpotent algebra JSON file")->required();

    CLI::App* catalog = app.add_subcommand("catalog", "built-in examples");
    catalog->require_subcommand(1);
    CLI::App* cat_list = catalog->add_subcommand("list", "list example names");
    CLI::App* cat_show = catalog->add_subcommand("show", "print an example as algebra JSON");
    cat_show->add_option("name", st.show_name, "example name")->required();
    cat_show->add_flag("--embeddable", st.embeddable,
                       "print the rank-one extension for nilpotent entries");
    cat_show->add_option("-o,--output", st.output, "write the JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(st);
        if (embed->parsed()) return cmd_embed(st);
        if (verify->parsed()) return cmd_verify(st);
        if (ricci->parsed()) return cmd_ricci(st);
        if (soliton->parsed()) return cmd_soliton(st);
        if (catalog->parsed()) {
            if (cat_list->parsed()) return cmd_catalog_list();
            if (cat_show->parsed()) return cmd_catalog_show(st);
        }
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const solvembed::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const solvembed::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const solvembed::UnknownName& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const solvembed::DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const solvembed::Error& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
