// Copyright 2026 The QSignal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsignal/report_io.hpp"

#include <array>
#include <charconv>
#include <sstream>

namespace qsignal {

using Json = nlohmann::ordered_json;

std::string format_number(double value) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
    return std::string(buf.data(), end);
}

namespace {

template <typename T>
std::string optional_field(const std::optional<T> &v) {
    if (!v) {
        return "";
    }
    if constexpr (std::is_same_v<T, bool>) {
        return *v ? "1" : "0";
    } else {
        return format_number(*v);
    }
}

template <typename T>
Json optional_json(const std::optional<T> &v) {
    return v ? Json(*v) : Json(nullptr);
}

Json protocol2_params_json(const Protocol2Params &p) {
    return Json{{"sigma", p.sigma}, {"sigma_bar", p.sigma_bar}, {"d", p.d},
                {"k", p.k},         {"n_trials", p.n_trials},   {"seed", p.seed},
                {"sender_acts", p.sender_acts}};
}

}  // namespace

Json trial_json(const TrialRecord &t) {
    return Json{{"trial_index", t.trial_index},
                {"intermediate_outcome", optional_json(t.intermediate_outcome)},
                {"lambda", optional_json(t.lambda)},
                {"receiver_detected", t.receiver_detected},
                {"receiver_probability", t.receiver_probability},
                {"ensemble_detected", optional_json(t.ensemble_detected)}};
}

Json operator_json(const Operator &op) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < op.dimension(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < op.dimension(); ++c) {
            row.push_back(Json::array({op(r, c).real(), op(r, c).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json to_json(const Protocol1Report &r, bool emit_trials) {
    Json out;
    out["params"] = {{"n_trials", r.params.n_trials},
                     {"sender_acts", r.params.sender_acts},
                     {"n_particles", r.params.n_particles},
                     {"seed", r.params.seed}};
    out["analytic"] = {{"p_receiver", r.analytic_probability},
                       {"ensemble_success", r.analytic_ensemble_success},
                       {"confidence_halfwidth", r.confidence_halfwidth}};
    out["empirical"] = {{"detections", r.detections},
                        {"p_receiver", r.empirical_probability},
                        {"ensemble_detections", r.ensemble_detections},
                        {"ensemble_success", r.empirical_ensemble_success}};
    out["diagnostics"] = {
        {"basis", Json::array({"A", "B"})},
        {"commutator_norm", r.commutator_norm},
        {"within_band", std::abs(r.empirical_probability - r.analytic_probability) <= r.confidence_halfwidth}};
    if (emit_trials) {
        Json trials = Json::array();
        for (const auto &t : r.trials) {
            trials.push_back(trial_json(t));
        }
        out["trials"] = std::move(trials);
    }
    return out;
}

Json to_json(const Protocol2Report &r, bool emit_trials, const std::vector<LambdaPoint> &lambda_table) {
    Json out;
    out["params"] = protocol2_params_json(r.params);
    out["analytic"] = {{"p_before", r.p_before},
                       {"p_after", r.p_after},
                       {"gap", r.p_after - r.p_before},
                       {"p_receiver", r.analytic_probability},
                       {"confidence_halfwidth", r.confidence_halfwidth}};
    out["empirical"] = {{"detections", r.detections}, {"p_receiver", r.empirical_probability}};
    Json diagnostics = {{"commutator_norm", "not-applicable"}, {"max_lambda_deviation", r.max_lambda_deviation}};
    if (!lambda_table.empty()) {
        Json table = Json::array();
        for (const auto &p : lambda_table) {
            table.push_back({{"lambda", p.lambda}, {"p_after", p.p_after}, {"deviation", p.deviation}});
        }
        diagnostics["lambda_scan"] = std::move(table);
    }
    out["diagnostics"] = std::move(diagnostics);
    if (emit_trials) {
        Json trials = Json::array();
        for (const auto &t : r.trials) {
            trials.push_back(trial_json(t));
        }
        out["trials"] = std::move(trials);
    }
    return out;
}

Json to_json(const std::string &parameter, const std::vector<ScanRow> &rows) {
    Json out = Json::array();
    for (const auto &row : rows) {
        out.push_back({{parameter, row.value},
                       {"sigma", row.params.sigma},
                       {"sigma_bar", row.params.sigma_bar},
                       {"d", row.params.d},
                       {"k", row.params.k},
                       {"p_before", row.analytic.p_before},
                       {"p_after", row.analytic.p_after},
                       {"gap", row.analytic.gap}});
    }
    return out;
}

std::string to_csv(const std::vector<TrialRecord> &trials) {
    std::ostringstream os;
    os << "trial_index,intermediate_outcome,lambda,receiver_detected,receiver_probability,ensemble_detected\n";
    for (const auto &t : trials) {
        os << t.trial_index << ',' << optional_field(t.intermediate_outcome) << ',' << optional_field(t.lambda)
           << ',' << (t.receiver_detected ? 1 : 0) << ',' << format_number(t.receiver_probability) << ','
           << optional_field(t.ensemble_detected) << '\n';
    }
    return os.str();
}

std::string to_csv(const std::string &parameter, const std::vector<ScanRow> &rows) {
    std::ostringstream os;
    os << parameter << ",sigma,sigma_bar,d,k,p_before,p_after,gap\n";
    for (const auto &row : rows) {
        os << format_number(row.value) << ',' << format_number(row.params.sigma) << ','
           << format_number(row.params.sigma_bar) << ',' << format_number(row.params.d) << ','
           << format_number(row.params.k) << ',' << format_number(row.analytic.p_before) << ','
           << format_number(row.analytic.p_after) << ',' << format_number(row.analytic.gap) << '\n';
    }
    return os.str();
}

Json audit_row_json(const AuditRow &row) {
    return Json{{"index", row.index},
                {"dimension", row.dimension},
                {"commutator_norm", row.record.commutator_norm},
                {"premise_holds", row.record.premise_holds},
                {"p_receiver_sender_measured", row.record.p_receiver_sender_measured},
                {"p_receiver_sender_idle", row.record.p_receiver_sender_idle},
                {"marginal_difference", row.record.marginal_difference},
                {"passed", row.passed}};
}

std::string to_csv(const std::vector<AuditRow> &rows) {
    std::ostringstream os;
    os << "index,dimension,commutator_norm,premise_holds,p_receiver_sender_measured,p_receiver_sender_idle,"
          "marginal_difference,passed\n";
    for (const auto &row : rows) {
        os << row.index << ',' << row.dimension << ',' << format_number(row.record.commutator_norm) << ','
           << (row.record.premise_holds ? 1 : 0) << ',' << format_number(row.record.p_receiver_sender_measured)
           << ',' << format_number(row.record.p_receiver_sender_idle) << ','
           << format_number(row.record.marginal_difference) << ',' << (row.passed ? 1 : 0) << '\n';
    }
    return os.str();
}

}  // namespace qsignal
