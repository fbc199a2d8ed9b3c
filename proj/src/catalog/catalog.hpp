#pragma once

#include <optional>
#include <string>
#include <vector>

#include "io/json_io.hpp"

namespace incl {

/// Ready-made inclusion with its witnesses.
struct CatalogSetup {
  std::string name;
  std::string description;
  Inclusion inclusion;
  std::optional<GroupAction> action;
  std::vector<Element> rohlin_witness;  // periodic sequence, empty when none is known
  std::vector<Element> approx_witness;  // periodic sequence, empty when none is known
};

const std::vector<std::string>& catalog_names();

/// Throws InvalidArgument for an unknown name.
CatalogSetup catalog_setup(const std::string& name, const Tolerance& tol);

struct CatalogCheck {
  std::string name;
  Json expected;
  Json actual;
  double max_defect = 0.0;
  std::string provenance;  // "reference-value", "oracle" or "trivial"
  bool pass = false;
};

struct CatalogEntryResult {
  std::string entry;
  std::vector<CatalogCheck> checks;
  std::string error;  // exception text when the entry could not be built
  bool pass = false;
};

struct CatalogReport {
  std::vector<CatalogEntryResult> entries;
  bool pass = false;
};

/// Runs every entry whose name matches the shell-style `filter` (all when empty).
CatalogReport run_catalog(const std::string& filter, const Tolerance& tol);
CatalogEntryResult run_catalog_entry(const std::string& name, const Tolerance& tol);

Json to_json(const CatalogCheck& c);
Json to_json(const CatalogEntryResult& r);
Json to_json(const CatalogReport& r);

}  // namespace incl
