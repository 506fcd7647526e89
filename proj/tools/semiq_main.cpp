#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "semiq/json_io.hpp"
#include "semiq/semiq.hpp"

namespace {

using namespace semiq;

struct Output {
    std::string path;  // empty: stdout

    void write(const std::string& content) const {
        if (path.empty()) {
            std::cout << content;
            return;
        }
        atomic_write(path, content);
    }
};

Guards guards_from_env() {
    Guards g;
    if (const char* v = std::getenv("SEMIQ_GUARD_MAX_TABLEAUX")) g.max_stream_rows = std::atol(v);
    return g;
}

void add_guard_flags(CLI::App* cmd, Guards& g) {
    cmd->add_option("--max-tableaux", g.max_stream_rows, "tableau enumeration/stream guard");
    cmd->add_option("--max-rank", g.max_rank_dim, "rank target guard");
    cmd->add_option("--max-eval-terms", g.max_eval_terms, "decomposable term guard for eval");
    cmd->add_option("--max-mdisc", g.max_mdisc_size, "mixed discriminant size guard");
    cmd->add_option("--max-rewrite-labels", g.max_rewrite_labels, "rewrite certificate label guard");
}

std::string span_text(const SpanCheckReport& rep) {
    std::ostringstream os;
    os << (rep.strong ? "strong-span-check" : "span-check") << " n=" << rep.n << " d=" << rep.d << ": "
       << (rep.verdict == SpanVerdict::Spans ? "Spans" : "FailsToSpan") << " (rank " << rep.rank << " of "
       << rep.d2.get_str() << ", " << rep.rows_streamed << " rows";
    os << (rep.exhaustive ? ", exhaustive)" : ", streamed)") << "\n";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semiq: exact workbench for matrix semi-invariants of the Kronecker quiver"};
    app.require_subcommand(1);

    Guards guards = guards_from_env();
    unsigned threads = 0;
    std::uint64_t seed = 0;
    app.add_option("--threads", threads, "worker thread cap (0 = hardware)");
    app.add_option("--seed", seed, "seed for randomized commands");

    std::string in_path, out_path, expr_path, mat_path, fmt = "json";

    auto* c_straighten = app.add_subcommand("straighten", "expand a bracket monomial over the standard basis");
    c_straighten->add_option("--in", in_path, "bracket monomial JSON")->required();
    c_straighten->add_option("--out", out_path, "output path (default stdout)");
    add_guard_flags(c_straighten, guards);

    auto* c_canon = app.add_subcommand("canon", "canonical form of an expression");
    c_canon->add_option("--in", in_path, "expression JSON")->required();
    c_canon->add_option("--out", out_path, "output path");
    add_guard_flags(c_canon, guards);

    auto* c_eval = app.add_subcommand("eval", "evaluate an expression on a matrix tuple");
    c_eval->add_option("--expr", expr_path, "expression JSON")->required();
    c_eval->add_option("--matrices", mat_path, "matrix tuple JSON")->required();
    c_eval->add_option("--out", out_path, "output path");
    add_guard_flags(c_eval, guards);

    auto* c_mdisc = app.add_subcommand("mdisc", "mixed discriminant of square matrices");
    c_mdisc->add_option("--in", in_path, "JSON {\"matrices\": [s x s rational matrices]}")->required();
    c_mdisc->add_option("--out", out_path, "output path");
    add_guard_flags(c_mdisc, guards);

    bool rsk_inverse_mode = false;
    int opt_n = 0, opt_d = 0;
    auto* c_rsk = app.add_subcommand("rsk", "RSK correspondence for correlated diagrams");
    c_rsk->add_option("--in", in_path, "diagram JSON (or {P,Q} with --inverse)")->required();
    c_rsk->add_flag("--inverse", rsk_inverse_mode, "map a tableau pair back to its diagram");
    c_rsk->add_option("-n", opt_n, "block size (inverse mode)");
    c_rsk->add_option("-d", opt_d, "grid size (inverse mode)");
    c_rsk->add_option("--out", out_path, "output path");

    bool dims_exact = false, dims_gen_rank = false;
    auto* c_dims = app.add_subcommand("dims", "dimension report");
    c_dims->add_option("-n", opt_n, "block size")->required();
    c_dims->add_option("-d", opt_d, "grid size")->required();
    c_dims->add_flag("--exact", dims_exact, "count disconnected tableaux by enumeration");
    c_dims->add_flag("--gen-rank", dims_gen_rank, "include the kernel generator rank");
    c_dims->add_option("--format", fmt, "json|csv|text");
    c_dims->add_option("--out", out_path, "output path");
    add_guard_flags(c_dims, guards);

    int dmax = 0;
    auto* c_span = app.add_subcommand("span-check", "do disconnected tableaux span modulo the kernel?");
    c_span->add_option("-n", opt_n, "block size");
    c_span->add_option("-d", opt_d, "grid size");
    c_span->add_option("--dmax", dmax, "run the n=2 series for d = 3..dmax");
    c_span->add_option("--format", fmt, "json|text");
    c_span->add_option("--out", out_path, "output path");
    add_guard_flags(c_span, guards);

    auto* c_strong = app.add_subcommand("strong-span-check", "span check for the non-simple family");
    c_strong->add_option("-n", opt_n, "block size")->required();
    c_strong->add_option("-d", opt_d, "grid size")->required();
    c_strong->add_option("--format", fmt, "json|text");
    c_strong->add_option("--out", out_path, "output path");
    add_guard_flags(c_strong, guards);

    bool no_transcript = false;
    auto* c_rewrite = app.add_subcommand("rewrite", "certificate expressing a simple connected tableau over non-simple keys");
    c_rewrite->add_option("--tableau", in_path, "tableau JSON")->required();
    c_rewrite->add_option("--out", out_path, "certificate path")->required();
    c_rewrite->add_flag("--no-transcript", no_transcript, "omit the derivation transcript");
    add_guard_flags(c_rewrite, guards);

    auto* c_verify = app.add_subcommand("verify-cert", "check a rewrite certificate exactly");
    c_verify->add_option("cert", in_path, "certificate JSON")->required();
    add_guard_flags(c_verify, guards);

    auto* c_audit = app.add_subcommand("audit", "module decomposition and orthogonality audit");
    c_audit->add_option("-n", opt_n, "block size")->required();
    c_audit->add_option("-d", opt_d, "grid size")->required();
    c_audit->add_option("--out", out_path, "output path");
    add_guard_flags(c_audit, guards);

    int nmax = 0;
    auto* c_sweep = app.add_subcommand("sweep", "exact big-integer sweep of the lower-bound inequality");
    c_sweep->add_option("--nmax", nmax, "largest n")->required();
    c_sweep->add_option("--out", out_path, "output path");

    CLI11_PARSE(app, argc, argv);
    (void)threads;
    (void)seed;

    try {
        Output out{out_path};
        if (*c_straighten) {
            BracketMonomial m = bracket_from_json(read_json_file(in_path));
            StraightenContext ctx(m.n, m.d);
            out.write(dump(to_json(m.n, m.d, ctx.straighten(m))));
        } else if (*c_canon) {
            Expression e = expression_from_json(read_json_file(in_path));
            StraightenContext ctx(e.n, e.d);
            out.write(dump(to_json(ctx.canonical_form(e))));
        } else if (*c_eval) {
            Expression e = expression_from_json(read_json_file(expr_path));
            MatrixTuple B = matrix_tuple_from_json(read_json_file(mat_path));
            Rat v = eval_phi(e, B, guards);
            out.write(dump(Json{{"value", rat_to_string(v)}}));
        } else if (*c_mdisc) {
            Json j = read_json_file(in_path);
            std::vector<std::vector<Rat>> mats;
            for (const auto& m : j.at("matrices")) {
                std::vector<Rat> mat;
                for (const auto& row : m)
                    for (const auto& e : row) mat.push_back(rat_from_string(e.get<std::string>()));
                mats.push_back(std::move(mat));
            }
            int s = static_cast<int>(mats.size());
            out.write(dump(Json{{"value", rat_to_string(mixed_discriminant(mats, s, guards))}}));
        } else if (*c_rsk) {
            Json j = read_json_file(in_path);
            if (rsk_inverse_mode) {
                if (opt_n < 1 || opt_d < 1) throw InputError("rsk --inverse requires -n and -d");
                SemistandardTableau P = ssyt_from_json(j.at("P"));
                SemistandardTableau Q = ssyt_from_json(j.at("Q"));
                out.write(dump(to_json(rsk_inverse(P, Q, opt_n, opt_d))));
            } else {
                CorrelatedDiagram D = diagram_from_json(j);
                auto [P, Q] = rsk(D);
                out.write(dump(Json{{"P", to_json(P)}, {"Q", to_json(Q)}}));
            }
        } else if (*c_dims) {
            DimensionReport rep = dimension_report(opt_n, opt_d, dims_exact, guards);
            Json j = to_json(rep);
            if (dims_gen_rank) {
                StraightenContext ctx(opt_n, opt_d);
                j["generatorRank"] = sft_dimensions(opt_n, opt_d, ctx, guards).generator_rank.get_str();
            }
            if (fmt == "csv") {
                std::string csv = dims_csv(rep);
                if (dims_gen_rank) {
                    csv.insert(csv.find('\n'), ",generatorRank");
                    csv.insert(csv.rfind('\n'), "," + j["generatorRank"].get<std::string>());
                }
                out.write(csv);
            } else if (fmt == "text") {
                std::ostringstream os;
                os << "dims n=" << rep.n << " d=" << rep.d << ": D1=" << rep.d1.get_str() << " D2=" << rep.d2.get_str()
                   << " kerDim=" << rep.ker_dim.get_str() << "\n";
                out.write(os.str());
            } else {
                out.write(dump(j));
            }
        } else if (*c_span) {
            if (dmax > 0) {
                auto reports = verify_theorem_2x2(dmax, guards);
                bool all = true;
                Json arr = Json::array();
                std::string text;
                for (const auto& r : reports) {
                    all = all && r.verdict == SpanVerdict::Spans;
                    arr.push_back(to_json(r));
                    text += span_text(r);
                }
                out.write(fmt == "text" ? text : dump(arr));
                return all ? 0 : 1;
            }
            if (opt_n < 1 || opt_d < 1) throw InputError("span-check requires -n and -d (or --dmax)");
            StraightenContext ctx(opt_n, opt_d);
            SpanCheckReport rep = span_check(opt_n, opt_d, ctx, guards);
            out.write(fmt == "text" ? span_text(rep) : dump(to_json(rep)));
            return rep.verdict == SpanVerdict::Spans ? 0 : 1;
        } else if (*c_strong) {
            StraightenContext ctx(opt_n, opt_d);
            SpanCheckReport rep = strong_span_check(opt_n, opt_d, ctx, guards);
            out.write(fmt == "text" ? span_text(rep) : dump(to_json(rep)));
            return rep.verdict == SpanVerdict::Spans ? 0 : 1;
        } else if (*c_rewrite) {
            CorrelatedTableau C = tableau_from_json(read_json_file(in_path));
            RewriteCertificate cert = rewrite_simple_connected(C, guards, !no_transcript);
            StraightenContext ctx(C.n, C.d);
            std::string why;
            if (!verify_certificate(cert, ctx, &why)) throw VerifyError("fresh certificate failed verification: " + why);
            out.write(dump(to_json(cert)));
        } else if (*c_verify) {
            RewriteCertificate cert = certificate_from_json(read_json_file(in_path));
            StraightenContext ctx(cert.input.n, cert.input.d);
            std::string why;
            if (!verify_certificate(cert, ctx, &why)) throw VerifyError("certificate invalid: " + why);
            std::cout << "certificate ok\n";
        } else if (*c_audit) {
            StraightenContext ctx(opt_n, opt_d);
            out.write(dump(to_json(decomposition_audit(opt_n, opt_d, ctx, guards))));
        } else if (*c_sweep) {
            out.write(sweep_csv(lower_bound_sweep(nmax)));
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const GuardError& e) {
        std::cerr << "guard exceeded: " << e.what() << "\n";
        return 3;
    } catch (const VerifyError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
