#include "emle/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>

namespace emle {

namespace {

nlohmann::json face_rows(const ContingencyTable& table, const FacialSet& fs) {
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < table.num_cells(); ++i) {
        const auto idx = table.cell_index(i);
        auto levels = nlohmann::json::array();
        for (std::size_t k = 0; k < idx.size(); ++k) levels.push_back(table.factors()[k].levels[idx[k]]);
        rows.push_back({{"levels", levels}, {"count", table.count(i)}, {"in_face", static_cast<bool>(fs.in_face[i])}});
    }
    return rows;
}

nlohmann::json factor_names(const ContingencyTable& table) {
    auto names = nlohmann::json::array();
    for (const auto& f : table.factors()) names.push_back(f.name);
    return names;
}

std::string model_text(const ModelFormula& model) {
    return model.source().empty() ? model.formula_string() : model.source();
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.7g", v);
    return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

void section(std::ostream& out, const std::string& name) { out << '$' << name << '\n'; }

void scalar(std::ostream& out, const std::string& name, const std::string& value) {
    section(out, name);
    out << "[1] " << value << "\n\n";
}

std::string json_number(const nlohmann::json& v) {
    if (v.is_null()) return "NA";
    if (v.is_number_integer() || v.is_number_unsigned()) return std::to_string(v.get<long long>());
    return num(v.get<double>());
}

void write_face_table(std::ostream& out, const nlohmann::json& report) {
    const auto& names = report.at("factors");
    std::vector<std::string> header{""};
    for (const auto& n : names) header.push_back(n.get<std::string>());
    header.push_back("freq");
    header.push_back("facial_set");

    std::vector<std::vector<std::string>> body;
    std::size_t row = 1;
    for (const auto& cell : report.at("face")) {
        std::vector<std::string> r{std::to_string(row++)};
        for (const auto& l : cell.at("levels")) r.push_back(l.get<std::string>());
        r.push_back(std::to_string(cell.at("count").get<long long>()));
        r.push_back(cell.at("in_face").get<bool>() ? "1" : "0");
        body.push_back(std::move(r));
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& r : body) width[c] = std::max(width[c], r[c].size());
    }
    section(out, "face");
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? " " : "") << pad_left(header[c], width[c]);
    out << '\n';
    for (const auto& r : body) {
        for (std::size_t c = 0; c < r.size(); ++c) out << (c ? " " : "") << pad_left(r[c], width[c]);
        out << '\n';
    }
    out << '\n';
}

void write_coefficients(std::ostream& out, const nlohmann::json& coefs) {
    std::size_t name_w = 0;
    for (const auto& c : coefs) name_w = std::max(name_w, c.at("name").get<std::string>().size());
    section(out, "coefficients");
    out << pad_right("", name_w) << ' ' << pad_left("Estimate", 14) << ' ' << pad_left("Std.Error", 14) << '\n';
    for (const auto& c : coefs) {
        out << pad_right(c.at("name").get<std::string>(), name_w) << ' '
            << pad_left(json_number(c.at("estimate")), 14) << ' ' << pad_left(json_number(c.at("std_error")), 14);
        if (c.at("aliased").get<bool>()) out << "  (aliased)";
        out << '\n';
    }
    out << '\n';
}

}  // namespace

nlohmann::json make_report(const ContingencyTable& table, const ModelFormula& model,
                           const DesignMatrix& design, const FacialSet& fs,
                           const std::optional<FitResult>& fit) {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["formula"] = model_text(model);
    j["generators"] = model.generator_string();
    j["model_dimension"] = design.dimension();
    j["status"] = fs.status();
    j["termination"] = to_string(fs.termination);
    j["iterations"] = fs.iterations;
    j["factors"] = factor_names(table);
    j["face"] = face_rows(table, fs);
    j["face_dimension"] = fs.face_dimension;
    j["facial_set_size"] = fs.size();
    j["mle_exists"] = mle_exists(fs);
    j["total"] = table.total();
    auto removed = nlohmann::json::array();
    for (const auto& round : fs.removed_per_iteration) {
        auto labels = nlohmann::json::array();
        for (std::size_t i : round) labels.push_back(table.cell_label(i));
        removed.push_back(labels);
    }
    j["removed_per_iteration"] = removed;

    if (fit) {
        j["maxloglik"] = fit->loglik;
        auto coefs = nlohmann::json::array();
        for (const auto& c : fit->coefficients) {
            nlohmann::json e;
            e["name"] = c.name;
            e["term"] = c.term.label();
            e["aliased"] = c.aliased;
            e["estimate"] = c.estimate ? nlohmann::json(*c.estimate) : nlohmann::json(nullptr);
            e["std_error"] = c.std_error ? nlohmann::json(*c.std_error) : nlohmann::json(nullptr);
            coefs.push_back(e);
        }
        j["coefficients"] = coefs;
        auto aliased = nlohmann::json::array();
        for (const auto& t : fit->aliased_terms()) aliased.push_back(t.label());
        j["aliased_terms"] = aliased;
        j["fitted"] = fit->fitted_means;
        j["deviance"] = fit->deviance;
        j["residual_df"] = fit->residual_df;
        j["bic"] = fit->bic;
        j["cbic"] = fit->cbic;
        j["newton_iterations"] = fit->iterations;
    }
    return j;
}

nlohmann::json make_oracle_report(const ContingencyTable& table, const ModelFormula& model,
                                  const FacialSet& algorithm, const FacialSet& oracle) {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["formula"] = model_text(model);
    j["factors"] = factor_names(table);
    auto differing = nlohmann::json::array();
    for (std::size_t i = 0; i < table.num_cells(); ++i)
        if (algorithm.in_face[i] != oracle.in_face[i]) differing.push_back(table.cell_label(i));
    j["oracle_check"] = {
        {"agree", differing.empty()},
        {"differing_cells", differing},
        {"algorithm_iterations", algorithm.iterations},
        {"oracle_lp_solves", oracle.iterations},
        {"algorithm_face_dimension", algorithm.face_dimension},
        {"oracle_face_dimension", oracle.face_dimension},
        {"facial_set_size", algorithm.size()},
    };
    return j;
}

void write_text_report(std::ostream& out, const nlohmann::json& report) {
    section(out, "formula");
    out << report.at("formula").get<std::string>() << "\n\n";

    if (report.contains("oracle_check")) {
        const auto& oc = report.at("oracle_check");
        scalar(out, "oracle.check", oc.at("agree").get<bool>() ? "\"pass\"" : "\"fail\"");
        scalar(out, "algorithm.iterations", json_number(oc.at("algorithm_iterations")));
        scalar(out, "oracle.lp.solves", json_number(oc.at("oracle_lp_solves")));
        scalar(out, "face.dimension", json_number(oc.at("algorithm_face_dimension")));
        section(out, "differing.cells");
        if (oc.at("differing_cells").empty()) out << "(none)\n";
        for (const auto& c : oc.at("differing_cells")) out << c.get<std::string>() << '\n';
        return;
    }

    scalar(out, "model.dimension", json_number(report.at("model_dimension")));
    scalar(out, "status", "\"" + report.at("status").get<std::string>() + "\"");
    scalar(out, "iterations", json_number(report.at("iterations")));
    write_face_table(out, report);
    scalar(out, "face.dimension", json_number(report.at("face_dimension")));
    if (!report.contains("maxloglik")) return;
    scalar(out, "maxloglik", json_number(report.at("maxloglik")));
    write_coefficients(out, report.at("coefficients"));
    scalar(out, "deviance", json_number(report.at("deviance")));
    scalar(out, "residual.df", json_number(report.at("residual_df")));
    scalar(out, "bic", json_number(report.at("bic")));
    section(out, "cbic");
    out << "[1] " << json_number(report.at("cbic")) << '\n';
}

}  // namespace emle
