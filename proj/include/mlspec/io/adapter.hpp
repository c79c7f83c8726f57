#pragma once

// External classifier / oracle processes.
//
// The command runs under /bin/sh once per batch. Each input is written as
// one line of tab-separated values (numeric components as decimals, a
// categorical x as its symbol); the process answers with one label per
// line in the same order and exits 0 after its input is closed.

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mlspec/world.hpp"

namespace mlspec::io {

struct AdapterSpec {
  std::string command;
  /// Working directory of the process; empty keeps the current one.
  std::filesystem::path directory;
};

/// Raw line exchange. Throws Error(AdapterCrashed) when the process cannot
/// start, dies or exits non-zero.
std::vector<std::string> exchange_lines(const AdapterSpec& adapter, const std::vector<std::string>& requests);

/// "1.5\t-2", "sunny". Non-terminating components use 20 significant digits.
std::string encode_input(const Value& x);

/// One label per input, in order. Throws Error(ProtocolViolation) on a
/// missing, extra or malformed response line and Error(UnknownLabel) when
/// `labels` is non-empty and a response is outside it. Messages name the
/// offending line.
std::vector<Value> run_adapter(const AdapterSpec& adapter, std::span<const Value> inputs,
                               const std::set<std::string>& labels);

/// Copy of `w` with `variable` (yhat or y) set from the adapter's answer
/// for each state's x. Each distinct x is sent once.
World label_world(const World& w, const AdapterSpec& adapter, const std::string& variable,
                  const std::set<std::string>& labels);

}  // namespace mlspec::io
