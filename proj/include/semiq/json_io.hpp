#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semiq/core.hpp"
#include "semiq/correlated.hpp"
#include "semiq/diagram.hpp"
#include "semiq/evaluate.hpp"
#include "semiq/experiments.hpp"
#include "semiq/rewrite.hpp"
#include "semiq/straighten.hpp"

namespace semiq {

using Json = nlohmann::json;

// ---- serialization -------------------------------------------------------

inline Json to_json(const CorrelatedTableau& C) {
    Json cells = Json::array();
    for (int i = 0; i < C.d; ++i) {
        Json row = Json::array();
        for (int j = 0; j < C.d; ++j) {
            Json cell = Json::array();
            for (int k : C.cell(i, j)) cell.push_back(k + 1);
            row.push_back(std::move(cell));
        }
        cells.push_back(std::move(row));
    }
    return Json{{"n", C.n}, {"d", C.d}, {"cells", std::move(cells)}};
}

inline CorrelatedTableau tableau_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("d") || !j.contains("cells"))
        throw InputError("tableau: expected {n, d, cells}");
    CorrelatedTableau C;
    C.n = j.at("n").get<int>();
    C.d = j.at("d").get<int>();
    if (C.n < 1 || C.d < 1) throw InputError("tableau: n and d must be positive");
    int dn = C.n * C.d;
    C.cell_of.assign(static_cast<std::size_t>(dn), 255);
    const Json& cells = j.at("cells");
    if (static_cast<int>(cells.size()) != C.d) throw InputError("tableau: expected d rows of cells");
    for (int i = 0; i < C.d; ++i) {
        if (static_cast<int>(cells[i].size()) != C.d) throw InputError("tableau: expected d cells per row");
        for (int jj = 0; jj < C.d; ++jj)
            for (const auto& e : cells[i][jj]) {
                int v = e.get<int>();
                if (v < 1 || v > dn) throw InputError("tableau: label out of range");
                if (C.cell_of[static_cast<std::size_t>(v - 1)] != 255) throw InputError("tableau: label repeated");
                C.cell_of[static_cast<std::size_t>(v - 1)] = static_cast<std::uint8_t>(i * C.d + jj);
            }
    }
    for (auto c : C.cell_of)
        if (c == 255) throw InputError("tableau: cells must partition [dn]");
    C.validate();
    return C;
}

inline Json to_json(const Expression& e) {
    std::vector<const CorrelatedTableau*> keys;
    keys.reserve(e.terms.size());
    for (const auto& [k, c] : e.terms) keys.push_back(&k);
    std::sort(keys.begin(), keys.end(), [](const CorrelatedTableau* a, const CorrelatedTableau* b) {
        return a->cell_of < b->cell_of;
    });
    Json terms = Json::array();
    for (const auto* k : keys)
        terms.push_back(Json{{"tableau", to_json(*k)}, {"coeff", rat_to_string(e.terms.at(*k))}});
    return Json{{"n", e.n}, {"d", e.d}, {"terms", std::move(terms)}};
}

inline Expression expression_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("d") || !j.contains("terms"))
        throw InputError("expression: expected {n, d, terms}");
    Expression e(j.at("n").get<int>(), j.at("d").get<int>());
    for (const auto& t : j.at("terms")) {
        CorrelatedTableau C = tableau_from_json(t.at("tableau"));
        e.add(C, rat_from_string(t.at("coeff").get<std::string>()));
    }
    return e;
}

inline Json to_json(const BracketMonomial& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.d; ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.n; ++j) row.push_back(m.at(i, j) + 1);
        rows.push_back(std::move(row));
    }
    return Json{{"n", m.n}, {"d", m.d}, {"rows", std::move(rows)}, {"sign", m.sign}};
}

inline BracketMonomial bracket_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("d") || !j.contains("rows"))
        throw InputError("bracket monomial: expected {n, d, rows}");
    int n = j.at("n").get<int>(), d = j.at("d").get<int>();
    if (n < 1 || d < 1) throw InputError("bracket monomial: n and d must be positive");
    std::vector<std::uint8_t> raw;
    const Json& rows = j.at("rows");
    if (static_cast<int>(rows.size()) != d) throw InputError("bracket monomial: expected d rows");
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != n) throw InputError("bracket monomial: expected n entries per row");
        for (const auto& e : r) {
            int v = e.get<int>();
            if (v < 1 || v > n * d) throw InputError("bracket monomial: entry out of range");
            raw.push_back(static_cast<std::uint8_t>(v - 1));
        }
    }
    int sign = j.value("sign", 1);
    if (sign != 1 && sign != -1) throw InputError("bracket monomial: sign must be +-1");
    NormalizedBracket nb = normalize_bracket_rows(n, d, raw, sign);
    if (nb.is_zero) throw InputError("bracket monomial: a row repeats an entry (the zero monomial)");
    return nb.mono;
}

inline Json to_json(int n, int d, const FactorExpression& f) {
    std::vector<const std::vector<std::uint8_t>*> keys;
    for (const auto& [k, c] : f.terms) keys.push_back(&k);
    std::sort(keys.begin(), keys.end(),
              [](const auto* a, const auto* b) { return *a < *b; });
    Json terms = Json::array();
    for (const auto* k : keys) {
        Json rows = Json::array();
        for (int i = 0; i < d; ++i) {
            Json row = Json::array();
            for (int j = 0; j < n; ++j) row.push_back((*k)[static_cast<std::size_t>(i) * n + j] + 1);
            rows.push_back(std::move(row));
        }
        terms.push_back(Json{{"rows", std::move(rows)}, {"coeff", rat_to_string(f.terms.at(*k))}});
    }
    return Json{{"n", n}, {"d", d}, {"terms", std::move(terms)}};
}

inline Json to_json(const CanonicalVector& v) {
    Json coords = Json::array();
    for (const auto& [i, c] : v.coords) coords.push_back(Json::array({i, rat_to_string(c)}));
    return Json{{"n", v.n}, {"d", v.d}, {"basis", "standard-tensor-standard"}, {"coords", std::move(coords)}};
}

inline Json to_json(const MatrixTuple& B) {
    Json mats = Json::array();
    for (const auto& m : B.mats) {
        Json rows = Json::array();
        for (int i = 0; i < B.n; ++i) {
            Json row = Json::array();
            for (int j = 0; j < B.n; ++j) row.push_back(rat_to_string(m[static_cast<std::size_t>(i) * B.n + j]));
            rows.push_back(std::move(row));
        }
        mats.push_back(std::move(rows));
    }
    return Json{{"n", B.n}, {"d", B.d}, {"matrices", std::move(mats)}};
}

inline MatrixTuple matrix_tuple_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("d") || !j.contains("matrices"))
        throw InputError("matrix tuple: expected {n, d, matrices}");
    MatrixTuple B;
    B.n = j.at("n").get<int>();
    B.d = j.at("d").get<int>();
    for (const auto& m : j.at("matrices")) {
        std::vector<Rat> mat;
        if (static_cast<int>(m.size()) != B.n) throw InputError("matrix tuple: expected n rows");
        for (const auto& row : m) {
            if (static_cast<int>(row.size()) != B.n) throw InputError("matrix tuple: expected n columns");
            for (const auto& e : row) mat.push_back(rat_from_string(e.get<std::string>()));
        }
        B.mats.push_back(std::move(mat));
    }
    B.validate();
    return B;
}

inline Json to_json(const CorrelatedDiagram& D) {
    Json counts = Json::array();
    for (int i = 0; i < D.d; ++i) {
        Json row = Json::array();
        for (int j = 0; j < D.d; ++j) row.push_back(D.at(i, j));
        counts.push_back(std::move(row));
    }
    return Json{{"n", D.n}, {"d", D.d}, {"counts", std::move(counts)}};
}

inline CorrelatedDiagram diagram_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("d") || !j.contains("counts"))
        throw InputError("diagram: expected {n, d, counts}");
    int n = j.at("n").get<int>(), d = j.at("d").get<int>();
    std::vector<int> counts;
    for (const auto& row : j.at("counts"))
        for (const auto& e : row) counts.push_back(e.get<int>());
    try {
        return CorrelatedDiagram(n, d, std::move(counts));
    } catch (const InputError&) {
        throw;
    }
}

inline Json to_json(const SemistandardTableau& t) {
    Json rows = Json::array();
    for (const auto& r : t.rows) rows.push_back(r);
    return Json{{"rows", std::move(rows)}};
}

inline SemistandardTableau ssyt_from_json(const Json& j) {
    SemistandardTableau t;
    for (const auto& r : j.at("rows")) t.rows.push_back(r.get<std::vector<int>>());
    if (!t.valid()) throw InputError("tableau is not semistandard");
    return t;
}

inline Json to_json(const RewriteCertificate& cert) {
    Json transcript = Json::array();
    for (const auto& e : cert.transcript) {
        if (e.type == "perm") {
            Json perm = Json::array();
            for (int x : e.perm) perm.push_back(x + 1);
            transcript.push_back(Json{{"type", "perm"}, {"sigma", std::move(perm)}});
        } else {
            transcript.push_back(Json{{"type", "adjSwap"}, {"e", e.e + 1}, {"ep", e.ep + 1}});
        }
    }
    return Json{{"input", to_json(cert.input)},
                {"outputTerms", to_json(cert.output_terms)},
                {"kernelPart", to_json(cert.kernel_part)},
                {"transcript", std::move(transcript)}};
}

inline RewriteCertificate certificate_from_json(const Json& j) {
    RewriteCertificate cert;
    cert.input = tableau_from_json(j.at("input"));
    cert.output_terms = expression_from_json(j.at("outputTerms"));
    cert.kernel_part = expression_from_json(j.at("kernelPart"));
    if (j.contains("transcript"))
        for (const auto& e : j.at("transcript")) {
            TranscriptEntry te;
            te.type = e.at("type").get<std::string>();
            if (te.type == "perm") {
                for (const auto& x : e.at("sigma")) te.perm.push_back(x.get<int>() - 1);
            } else if (te.type == "adjSwap") {
                te.e = e.at("e").get<int>() - 1;
                te.ep = e.at("ep").get<int>() - 1;
            } else {
                throw InputError("certificate: unknown transcript entry type");
            }
            cert.transcript.push_back(std::move(te));
        }
    return cert;
}

inline Json to_json(const SpanCheckReport& r) {
    Json witnesses = Json::array();
    for (const auto& w : r.witnesses) witnesses.push_back(to_json(w));
    return Json{{"n", r.n},
                {"d", r.d},
                {"mode", r.strong ? "strong" : "disconnected"},
                {"dimTotal", r.dim_total.get_str()},
                {"d2", r.d2.get_str()},
                {"rank", r.rank},
                {"verdict", r.verdict == SpanVerdict::Spans ? "Spans" : "FailsToSpan"},
                {"exhaustive", r.exhaustive},
                {"rowsStreamed", r.rows_streamed},
                {"witnesses", std::move(witnesses)}};
}

inline Json to_json(const DimensionReport& r) {
    Json j{{"n", r.n},
           {"d", r.d},
           {"D1", r.d1.get_str()},
           {"D2", r.d2.get_str()},
           {"kerDim", r.ker_dim.get_str()},
           {"disconnectedLower", r.disconnected_lower.get_str()},
           {"disconnectedUpper", r.disconnected_upper.get_str()},
           {"flagUpperBelowD2", r.flag_upper_below_d2}};
    if (r.exact_disconnected) {
        j["exactDisconnected"] = r.exact_disconnected->get_str();
        j["flagBoundsOk"] = r.flag_bounds_ok;
        j["flagCountingNecessary"] = r.flag_counting_necessary;
    }
    return j;
}

inline std::string dims_csv(const DimensionReport& r) {
    std::ostringstream os;
    os << "n,d,D1,D2,kerDim,lower,upper,exact,upperBelowD2,boundsOk,countingNecessary\n";
    os << r.n << ',' << r.d << ',' << r.d1.get_str() << ',' << r.d2.get_str() << ',' << r.ker_dim.get_str() << ','
       << r.disconnected_lower.get_str() << ',' << r.disconnected_upper.get_str() << ','
       << (r.exact_disconnected ? r.exact_disconnected->get_str() : "") << ','
       << (r.flag_upper_below_d2 ? 1 : 0) << ',' << (r.exact_disconnected ? (r.flag_bounds_ok ? "1" : "0") : "") << ','
       << (r.exact_disconnected ? (r.flag_counting_necessary ? "1" : "0") : "") << "\n";
    return os.str();
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "n,d,degree,lhs,rhs,obstructionHolds\n";
    for (const auto& r : rows)
        os << r.n << ',' << r.d << ',' << r.degree << ',' << r.lhs.get_str() << ',' << r.rhs.get_str() << ','
           << (r.holds ? 1 : 0) << "\n";
    return os.str();
}

inline Json to_json(const AuditReport& r) {
    return Json{{"n", r.n},
                {"d", r.d},
                {"dimP", r.dim_p.get_str()},
                {"rankE", r.rank_e.get_str()},
                {"rankK", r.rank_k.get_str()},
                {"orthogonal", r.orthogonal},
                {"kostkaIdentity", r.kostka_identity},
                {"rankSumOk", r.rank_sum_ok},
                {"connectedKeys", r.connected_keys.get_str()},
                {"eeRank", r.ee_rank.get_str()},
                {"intersectionDim", r.intersection_dim.get_str()}};
}

// ---- files ----------------------------------------------------------------

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw InputError(std::string("malformed JSON in ") + path + ": " + ex.what());
    }
    return j;
}

/// Write via a temp file and rename, so failures never leave partial output.
inline void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp);
        out << content;
        if (!out.good()) throw InputError("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw InputError("rename failed for " + path);
}

inline std::string dump(const Json& j) { return j.dump(1) + "\n"; }

}  // namespace semiq
