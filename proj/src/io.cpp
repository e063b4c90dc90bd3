#include "framekit/io.hpp"

#include <cmath>

#include "framekit/error.hpp"

namespace framekit::io {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw DomainError(where + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw DomainError(where + ": missing field '" + key + "'");
    return *it;
}

std::size_t count_field(const Json& j, const char* key, const std::string& where) {
    const Json& v = field(j, key, where);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw DomainError(where + "." + key + ": expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

double number(const Json& j, const std::string& where) {
    if (!j.is_number()) throw DomainError(where + ": expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw DomainError(where + ": non-finite number");
    return x;
}

const Json& array(const Json& j, const std::string& where) {
    if (!j.is_array()) throw DomainError(where + ": expected an array");
    return j;
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

} // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) throw DomainError(where + ": expected [re, im]");
    return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

Json matrix_to_json(const ComplexMatrix& m) {
    Json data = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k) data.push_back(complex_to_json(m(i, k)));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
    const std::size_t rows = count_field(j, "rows", where);
    const std::size_t cols = count_field(j, "cols", where);
    const Json& data = array(field(j, "data", where), where + ".data");
    if (data.size() != rows * cols) {
        throw ShapeError(where + ".data: has " + std::to_string(data.size()) + " entries, expected " +
                         std::to_string(rows * cols));
    }
    std::vector<Complex> values;
    values.reserve(data.size());
    for (std::size_t k = 0; k < data.size(); ++k)
        values.push_back(complex_from_json(data[k], where + ".data[" + std::to_string(k) + "]"));
    return ComplexMatrix(rows, cols, std::move(values));
}

Json vector_to_json(const CVector& v) {
    Json out = Json::array();
    for (const auto& z : v) out.push_back(complex_to_json(z));
    return out;
}

CVector vector_from_json(const Json& j, const std::string& where) {
    array(j, where);
    CVector v;
    v.reserve(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) v.push_back(complex_from_json(j[k], where + "[" + std::to_string(k) + "]"));
    return v;
}

Json fiber_system_to_json(const FiberSystem& s) {
    Json vecs = Json::array();
    for (std::size_t i = 0; i < s.count(); ++i) vecs.push_back(vector_to_json(s.vector(i)));
    return {{"dim", s.dim()}, {"vectors", std::move(vecs)}};
}

FiberSystem fiber_system_from_json(const Json& j, const std::string& where) {
    const std::size_t dim = count_field(j, "dim", where);
    const Json& vecs = array(field(j, "vectors", where), where + ".vectors");
    std::vector<CVector> out;
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        const std::string w = where + ".vectors[" + std::to_string(i) + "]";
        CVector v = vector_from_json(vecs[i], w);
        if (v.size() != dim) {
            throw ShapeError(w + ": has length " + std::to_string(v.size()) + ", expected " + std::to_string(dim));
        }
        out.push_back(std::move(v));
    }
    if (out.empty()) throw DomainError(where + ".vectors: needs at least one vector");
    if (dim == 0) throw DomainError(where + ".dim: must be positive");
    return FiberSystem(dim, out);
}

Json system_file_to_json(const FiberedSystem& a, const FiberedSystem* b) {
    Json atoms = Json::array();
    for (std::size_t k = 0; k < a.atoms(); ++k) {
        Json atom{{"id", a.measure().id(k)}, {"weight", a.measure().weight(k)}, {"A", fiber_system_to_json(a.fiber(k))}};
        if (b != nullptr) atom["B"] = fiber_system_to_json(b->fiber(k));
        atoms.push_back(std::move(atom));
    }
    return {{"fiber_dim", a.fiber_dim()}, {"atoms", std::move(atoms)}};
}

SystemFile system_file_from_json(const Json& j) {
    const std::size_t d = count_field(j, "fiber_dim", "input");
    const Json& atoms = array(field(j, "atoms", "input"), "input.atoms");
    if (atoms.empty()) throw DomainError("input.atoms: needs at least one atom");
    std::vector<std::string> ids;
    std::vector<double> weights;
    std::vector<FiberSystem> fa;
    std::vector<FiberSystem> fb;
    const bool has_b = atoms[0].is_object() && atoms[0].contains("B");
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        const std::string w = "input.atoms[" + std::to_string(k) + "]";
        const Json& id = field(atoms[k], "id", w);
        if (!id.is_string()) throw DomainError(w + ".id: expected a string");
        ids.push_back(id.get<std::string>());
        weights.push_back(number(field(atoms[k], "weight", w), w + ".weight"));
        fa.push_back(fiber_system_from_json(field(atoms[k], "A", w), w + ".A"));
        if (atoms[k].contains("B") != has_b) throw DomainError(w + ": field 'B' must be present at every atom or none");
        if (has_b) fb.push_back(fiber_system_from_json(atoms[k]["B"], w + ".B"));
    }
    MeasureModel m(std::move(ids), std::move(weights));
    SystemFile out{FiberedSystem(m, d, std::move(fa)), std::nullopt};
    if (has_b) out.b = FiberedSystem(m, d, std::move(fb));
    return out;
}

Json fibered_function_to_json(const FiberedFunction& f) {
    Json values = Json::array();
    for (const auto& v : f.values()) values.push_back(vector_to_json(v));
    return {{"fiber_dim", f.fiber_dim()}, {"values", std::move(values)}};
}

FiberedFunction fibered_function_from_json(const Json& j, const std::string& where) {
    const std::size_t d = count_field(j, "fiber_dim", where);
    const Json& values = array(field(j, "values", where), where + ".values");
    std::vector<CVector> out;
    for (std::size_t k = 0; k < values.size(); ++k)
        out.push_back(vector_from_json(values[k], where + ".values[" + std::to_string(k) + "]"));
    return FiberedFunction(d, std::move(out));
}

Json plan_to_json(const ZakPlan& plan) {
    const FiniteGroup& g = plan.group;
    Json group{{"kind", g.kind()}, {"order", g.order()}};
    if (g.kind() == "dihedral") group["n"] = g.parameter();
    if (g.kind() == "table") group["table"] = g.table();
    return {{"group", std::move(group)}, {"subgroup_generator", plan.generator}};
}

ZakPlan plan_from_json(const Json& j) {
    const Json& group = field(j, "group", "plan");
    const Json& kind = field(group, "kind", "plan.group");
    if (!kind.is_string()) throw DomainError("plan.group.kind: expected a string");
    const std::string k = kind.get<std::string>();
    const std::size_t order = count_field(group, "order", "plan.group");
    const std::size_t gen = count_field(j, "subgroup_generator", "plan");
    if (k == "cyclic") return build_plan(FiniteGroup::cyclic(order), gen);
    if (k == "dihedral") {
        if (order % 2 != 0 || order == 0) throw DomainError("plan.group.order: dihedral order must be even");
        return build_plan(FiniteGroup::dihedral(order / 2), gen);
    }
    if (k == "table") {
        const Json& t = array(field(group, "table", "plan.group"), "plan.group.table");
        std::vector<std::vector<std::size_t>> table;
        for (const auto& row : t) {
            if (!row.is_array()) throw DomainError("plan.group.table: rows must be arrays");
            table.push_back(row.get<std::vector<std::size_t>>());
        }
        if (table.size() != order) throw ShapeError("plan.group.table: size does not match order");
        return build_plan(FiniteGroup::from_table(std::move(table)), gen);
    }
    throw DomainError("plan.group.kind: unknown kind '" + k + "'");
}

Json signal_to_json(const GroupSignal& f) { return vector_to_json(f); }

GroupSignal signal_from_json(const Json& j, const std::string& where) { return vector_from_json(j, where); }

std::string witness_status_name(WitnessStatus s) {
    switch (s) {
    case WitnessStatus::none: return "none";
    case WitnessStatus::certified: return "certified";
    case WitnessStatus::unverified_bound: return "unverified_bound";
    }
    return "none";
}

Json equivalence_report_to_json(const EquivalenceReport& r, const MeasureModel& m) {
    Json diag = Json::array();
    for (const auto& d : r.diagnostics) {
        diag.push_back({{"atom", d.atom},
                        {"dimJA", d.dim_ja},
                        {"dimJB", d.dim_jb},
                        {"R_AB", d.r_ab},
                        {"R_BA", d.r_ba},
                        {"rank_mixed", d.rank_mixed},
                        {"pinv_norm", finite_or_null(d.pinv_norm)}});
    }
    Json out{{"holds_i", r.holds_i},
             {"holds_ii", r.holds_ii},
             {"holds_iii", r.holds_iii},
             {"holds_iv", r.holds_iv},
             {"angles_global", {{"R_AB", r.r_ab}, {"R_BA", r.r_ba}}},
             {"global_residual", r.global_residual},
             {"local_residual", r.local_residual},
             {"witness_status", witness_status_name(r.witness_status)},
             {"diagnostics", std::move(diag)}};
    if (!r.diagnostics.empty()) {
        const auto& w = r.diagnostics[r.worst_fiber];
        out["worst_fiber"] = {{"atom", m.id(r.worst_fiber)}, {"R_AB", w.r_ab}, {"R_BA", w.r_ba}};
    }
    if (r.witnesses) out["witnesses"] = system_file_to_json(r.witnesses->a_dual, &r.witnesses->b_dual);
    return out;
}

std::string diagnostics_csv(const EquivalenceReport& r) {
    std::string out = "atom,dimJA,dimJB,R_AB,R_BA,rank_mixed,pinv_norm\n";
    for (const auto& d : r.diagnostics) {
        out += d.atom + "," + std::to_string(d.dim_ja) + "," + std::to_string(d.dim_jb) + "," + format_double(d.r_ab) +
               "," + format_double(d.r_ba) + "," + std::to_string(d.rank_mixed) + "," + format_double(d.pinv_norm) +
               "\n";
    }
    return out;
}

Json biorth_report_to_json(const BiorthReport& r, const MeasureModel& m) {
    Json out{{"success", r.success},
             {"riesz_bounds", {r.riesz_lower, r.riesz_upper}},
             {"biorth_residual", r.biorth_residual}};
    if (r.failing_atom) {
        out["failing_atom"] = {{"atom", m.id(*r.failing_atom)}, {"R_AW", r.failing_r_aw}, {"R_WA", r.failing_r_wa}};
    }
    if (r.dual) out["dual"] = system_file_to_json(*r.dual);
    return out;
}

std::string format_double(double x) { return Json(x).dump(); }

} // namespace framekit::io
