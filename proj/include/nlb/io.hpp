#pragma once

#include <string>
#include <vector>

namespace nlb {

// 17 significant digits, enough for a bit-exact double round trip.
std::string fmt(double v);

// Write to path via a temporary sibling and rename.
void write_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

struct CsvTable {
  std::vector<std::string> comments;  // leading '#' lines without the marker
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);

// Parses "key=value" tokens from a comment line such as "t=1 L=2 n=8".
std::string comment_field(const std::vector<std::string>& comments, const std::string& key);

}  // namespace nlb
