#pragma once

#include "operadia/cobar.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace operadia::io {

using Json = nlohmann::json;

struct MalformedInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json to_json(const Rational& q);
Json to_json(const Matrix& m);
Json to_json(const SVec& v);
Json to_json(const GradedSpace& x);
Json to_json(const GradedMap& f);
Json to_json(const ChainComplex& c);
Json to_json(const Truncation& t);
Json to_json(const Seq& s);
Json to_json(const SymSeq& s);
Json to_json(const Operad& p);
Json to_json(const Coperad& q);
Json to_json(const CogebraOverOperad& v);
Json to_json(const QAlgebra& a);
Json to_json(const Report& r);
Json to_json(const CounterexampleReport& r);

Rational rational_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
SVec svec_from_json(const Json& j);
GradedSpace space_from_json(const Json& j);
GradedMap map_from_json(const Json& j);
ChainComplex complex_from_json(const Json& j);
Truncation truncation_from_json(const Json& j);
Seq seq_from_json(const Json& j);
SymSeq symseq_from_json(const Json& j);
Operad operad_from_json(const Json& j);
Coperad coperad_from_json(const Json& j);
CogebraOverOperad cogebra_from_json(const Json& j);
QAlgebra qalgebra_from_json(const Json& j);

// Typed payload: {"type": "...", ...}.
Json tagged(const std::string& type, Json body);

// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);
// Indented key/value rendering of the same document.
std::string render_text(const Json& j);

}  // namespace operadia::io
