#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "qprelax/sdp.hpp"

namespace qprelax {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void export_sdpa(const SdpStandard& sdp, std::ostream& out) {
  out << sdp.m << "\n";
  out << sdp.blocks.size() << "\n";
  for (std::size_t b = 0; b < sdp.blocks.size(); ++b) {
    if (b) out << " ";
    int s = sdp.blocks[b].size;
    out << (sdp.blocks[b].diagonal ? -s : s);
  }
  out << "\n";
  for (int k = 0; k < sdp.m; ++k) {
    if (k) out << " ";
    out << fmt17(sdp.cost[k]);
  }
  out << "\n";
  // entries ascending in (k, b, i, j); k = 0 is F_0
  for (int k = 0; k <= sdp.m; ++k) {
    for (std::size_t b = 0; b < sdp.blocks.size(); ++b) {
      const auto* entries = (k == 0) ? &sdp.blocks[b].f0 : nullptr;
      if (k > 0) {
        auto it = sdp.blocks[b].fk.find(k - 1);
        if (it == sdp.blocks[b].fk.end()) continue;
        entries = &it->second;
      }
      std::vector<SdpEntry> sorted(entries->begin(), entries->end());
      std::sort(sorted.begin(), sorted.end(), [](const SdpEntry& a, const SdpEntry& c) {
        return std::tie(a.i, a.j) < std::tie(c.i, c.j);
      });
      for (auto& e : sorted) {
        if (e.v == 0) continue;
        out << k << " " << (b + 1) << " " << (e.i + 1) << " " << (e.j + 1) << " " << fmt17(e.v) << "\n";
      }
    }
  }
  out << "*offset " << fmt17(sdp.offset) << "\n";
}

std::string export_sdpa_string(const SdpStandard& sdp) {
  std::ostringstream ss;
  export_sdpa(sdp, ss);
  return ss.str();
}

SdpStandard import_sdpa(std::istream& in) {
  SdpStandard sdp;
  std::string line;
  int lineno = 0;
  int stage = 0;  // 0: m, 1: nblocks, 2: sizes, 3: cost, 4: entries
  int nblocks = 0;
  auto fail = [&](const std::string& what) -> void {
    throw Error("sdpa line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && (line[0] == '"' || line[0] == '*')) {
      std::istringstream ss(line);
      std::string tag;
      ss >> tag;
      if (tag == "*offset") {
        double v;
        if (ss >> v) sdp.offset = v;
      }
      continue;
    }
    // SDPA allows ',' '(' ')' '{' '}' as separators
    for (auto& ch : line)
      if (ch == ',' || ch == '(' || ch == ')' || ch == '{' || ch == '}') ch = ' ';
    std::istringstream ss(line);
    if (stage == 0) {
      if (!(ss >> sdp.m)) continue;  // blank line
      if (sdp.m < 0) fail("negative m");
      ++stage;
    } else if (stage == 1) {
      if (!(ss >> nblocks)) continue;
      if (nblocks < 0) fail("negative block count");
      ++stage;
    } else if (stage == 2) {
      int s;
      while (ss >> s) {
        SdpBlock b;
        b.diagonal = s < 0;
        b.size = std::abs(s);
        sdp.blocks.push_back(std::move(b));
      }
      if (static_cast<int>(sdp.blocks.size()) != nblocks) fail("block size count mismatch");
      ++stage;
    } else if (stage == 3) {
      double v;
      while (ss >> v) sdp.cost.push_back(v);
      if (static_cast<int>(sdp.cost.size()) != sdp.m) fail("cost vector length mismatch");
      ++stage;
    } else {
      long k, b, i, j;
      double v;
      if (!(ss >> k >> b >> i >> j >> v)) {
        std::string rest;
        if (ss.clear(), ss.str().find_first_not_of(" \t\r\n") == std::string::npos) continue;
        fail("malformed entry line");
      }
      if (k < 0 || k > sdp.m) fail("matrix index out of range");
      if (b < 1 || b > static_cast<long>(sdp.blocks.size())) fail("block index out of range");
      auto& blk = sdp.blocks[b - 1];
      if (i < 1 || j < 1 || i > blk.size || j > blk.size) fail("entry index out of range");
      if (i > j) std::swap(i, j);
      if (blk.diagonal && i != j) fail("off-diagonal entry in diagonal block");
      SdpEntry e{static_cast<int>(i - 1), static_cast<int>(j - 1), v};
      if (k == 0)
        blk.f0.push_back(e);
      else
        blk.fk[static_cast<int>(k - 1)].push_back(e);
    }
  }
  if (stage < 4) throw Error("sdpa: truncated header");
  for (int k = 0; k < sdp.m; ++k) sdp.var_labels.push_back("y" + std::to_string(k + 1));
  return sdp;
}

SdpStandard import_sdpa_string(const std::string& text) {
  std::istringstream ss(text);
  return import_sdpa(ss);
}

}  // namespace qprelax
