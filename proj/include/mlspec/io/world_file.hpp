#pragma once

// CSV datasets.
//
//   #mult,x.temp,x.wind,y,yhat
//   2,3.5,1/2,pos,pos
//   1,-1,0,neg,pos
//
// `#mult` (optional, default 1) is a positive multiplicity. Feature
// columns are either `x.<name>` (exact decimals or a/b, collected into a
// numeric vector in header order) or a single categorical `x`. `y` is
// required, `yhat` optional. Labels match [A-Za-z0-9_.-]+.

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "mlspec/world.hpp"

namespace mlspec::io {

struct WorldFile {
  World world;
  /// Names of the x.<name> columns; empty for a categorical x.
  std::vector<std::string> features;
};

/// Throws Error(ParseError) with "source:line: ..." messages,
/// Error(SchemaMismatch) for inconsistent headers and Error(UnknownLabel)
/// when `labels` is non-empty and a y/yhat label is outside it.
WorldFile read_world(std::istream& in, const std::string& name, const std::set<std::string>& labels = {},
                     const std::string& source = "<input>");

WorldFile load_world(const std::filesystem::path& path, const std::string& name,
                     const std::set<std::string>& labels = {});

/// Writes one line per distinct state with its multiplicity. Rationals
/// are written as finite decimals when exact, else as p/q. `features`
/// names the components of a numeric x.
void write_world(std::ostream& out, const World& w, const std::vector<std::string>& features);

void save_world(const std::filesystem::path& path, const World& w,
                const std::vector<std::string>& features);

/// [A-Za-z0-9_.-]+
bool valid_label(std::string_view label);

}  // namespace mlspec::io
