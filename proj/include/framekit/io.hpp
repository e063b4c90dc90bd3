#pragma once

// JSON forms of the library types. Readers throw ShapeError / DomainError
// naming the offending field.

#include <optional>
#include <string>

#include <json.hpp>

#include "framekit/fiberframe.hpp"
#include "framekit/mispace.hpp"
#include "framekit/zak.hpp"

namespace framekit::io {

using Json = nlohmann::json;

/// [re, im]
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& where);

/// {"rows", "cols", "data": [[re, im], ...]} in row-major order.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& where = "matrix");

Json vector_to_json(const CVector& v);
CVector vector_from_json(const Json& j, const std::string& where);

/// {"dim": d, "vectors": [[[re, im], ...], ...]}
Json fiber_system_to_json(const FiberSystem& s);
FiberSystem fiber_system_from_json(const Json& j, const std::string& where = "system");

/// {"fiber_dim": d, "atoms": [{"id", "weight", "A", "B"?}, ...]}. B is
/// either present at every atom or at none.
struct SystemFile {
    FiberedSystem a;
    std::optional<FiberedSystem> b;
};

Json system_file_to_json(const FiberedSystem& a, const FiberedSystem* b = nullptr);
SystemFile system_file_from_json(const Json& j);

/// {"fiber_dim": d, "values": [[[re, im], ...], ...]}
Json fibered_function_to_json(const FiberedFunction& f);
FiberedFunction fibered_function_from_json(const Json& j, const std::string& where = "function");

/// {"group": {"kind": "cyclic" | "dihedral" | "table", "order": N, ...}, "subgroup_generator": g}
Json plan_to_json(const ZakPlan& plan);
ZakPlan plan_from_json(const Json& j);

Json signal_to_json(const GroupSignal& f);
GroupSignal signal_from_json(const Json& j, const std::string& where = "signal");

std::string witness_status_name(WitnessStatus s);

Json equivalence_report_to_json(const EquivalenceReport& r, const MeasureModel& m);
/// atom,dimJA,dimJB,R_AB,R_BA,rank_mixed,pinv_norm
std::string diagnostics_csv(const EquivalenceReport& r);

Json biorth_report_to_json(const BiorthReport& r, const MeasureModel& m);

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

} // namespace framekit::io
