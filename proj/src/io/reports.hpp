#pragma once

#include "io/json_io.hpp"
#include "basic/basic_construction.hpp"
#include "rohlin/rohlin.hpp"

namespace incl {

Json to_json(const ExpectationReport& r);
Json to_json(const FaithfulnessReport& r);
Json to_json(const QuasiBasisReport& r);
Json to_json(const IndexValue& v);
Json to_json(const BasicConstructionReport& r);
Json to_json(const DualIndexReport& r);
Json to_json(const TunnelReport& r);
Json to_json(const TowerLevel& t);
Json to_json(const ActionReport& r);
Json to_json(const InnerResult& r);
Json to_json(const PartitionReport& r);
Json to_json(const CriterionReport& r);
Json to_json(const SubgroupInclusionReport& r);
Json to_json(const RohlinReport& r);
Json to_json(const ApproxRepReport& r);
Json to_json(const ForwardReport& r);
Json to_json(const BackwardReport& r);
Json to_json(const RecoverReport& r);
Json to_json(const RoundTripReport& r);
Json to_json(const RelativeCommutantReport& r);
Json to_json(const BetaReport& r);
Json to_json(const EmbeddingReport& r);
Json to_json(const StageDefect& d);
Json to_json(const DefectCurve& c);

}  // namespace incl
