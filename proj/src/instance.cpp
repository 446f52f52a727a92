#include "qprelax/instance.hpp"

#include <sstream>

namespace qprelax {

void QpInstance::set_diag(int i, const Rat& v) {
  if (i < 1 || i > n) throw Error("diag index " + std::to_string(i) + " out of [1," + std::to_string(n) + "]");
  if (diag.count(i)) throw Error("duplicate diagonal coefficient for index " + std::to_string(i));
  if (v != 0) diag[i] = v;
}

void QpInstance::set_offdiag(int i, int j, const Rat& v) {
  if (i == j) throw Error("off-diagonal key must have i != j");
  if (i > j) std::swap(i, j);
  if (i < 1 || j > n) throw Error("off-diagonal index pair {" + std::to_string(i) + "," + std::to_string(j) + "} out of range");
  auto key = std::make_pair(i, j);
  if (offdiag.count(key)) throw Error("duplicate off-diagonal coefficient for pair {" + std::to_string(i) + "," + std::to_string(j) + "}");
  if (v != 0) offdiag[key] = v;
}

void QpInstance::set_linear(int i, const Rat& v) {
  if (i < 1 || i > n) throw Error("linear index " + std::to_string(i) + " out of [1," + std::to_string(n) + "]");
  if (linear.count(i)) throw Error("duplicate linear coefficient for index " + std::to_string(i));
  if (v != 0) linear[i] = v;
}

void QpInstance::validate() const {
  if (n <= 0) throw Error("instance has nonpositive n");
  for (auto& [i, v] : diag) {
    if (i < 1 || i > n) throw Error("diag index out of range");
    if (v == 0) throw Error("stored zero diagonal coefficient");
  }
  for (auto& [ij, v] : offdiag) {
    if (ij.first >= ij.second || ij.first < 1 || ij.second > n) throw Error("bad off-diagonal key");
    if (v == 0) throw Error("stored zero off-diagonal coefficient");
  }
  for (auto& [i, v] : linear) {
    if (i < 1 || i > n) throw Error("linear index out of range");
    if (v == 0) throw Error("stored zero linear coefficient");
  }
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

int parse_index(const std::string& tok, int lineno) {
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("trail");
    return v;
  } catch (const std::exception&) {
    throw Error("line " + std::to_string(lineno) + ": bad index '" + tok + "'");
  }
}

}  // namespace

QpInstance parse_instance(std::istream& in) {
  QpInstance inst;
  bool have_n = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (!have_n) {
      if (toks[0] != "n" || toks.size() != 2)
        throw Error("line " + std::to_string(lineno) + ": expected 'n <int>' before coefficients");
      inst.n = parse_index(toks[1], lineno);
      if (inst.n <= 0) throw Error("line " + std::to_string(lineno) + ": n must be positive");
      have_n = true;
      continue;
    }
    try {
      if (toks[0] == "d" && toks.size() == 3) {
        inst.set_diag(parse_index(toks[1], lineno), parse_decimal(toks[2]));
      } else if (toks[0] == "q" && toks.size() == 4) {
        inst.set_offdiag(parse_index(toks[1], lineno), parse_index(toks[2], lineno), parse_decimal(toks[3]));
      } else if (toks[0] == "c" && toks.size() == 3) {
        inst.set_linear(parse_index(toks[1], lineno), parse_decimal(toks[2]));
      } else {
        throw Error("unrecognized record '" + toks[0] + "'");
      }
    } catch (const Error& e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_n) throw Error("missing 'n <int>' line");
  return inst;
}

QpInstance parse_instance_text(const std::string& text) {
  std::istringstream ss(text);
  return parse_instance(ss);
}

std::string emit_instance(const QpInstance& inst) {
  std::ostringstream out;
  out << "n " << inst.n << "\n";
  for (auto& [i, v] : inst.diag) out << "d " << i << " " << decimal_string(v) << "\n";
  for (auto& [ij, v] : inst.offdiag) out << "q " << ij.first << " " << ij.second << " " << decimal_string(v) << "\n";
  for (auto& [i, v] : inst.linear) out << "c " << i << " " << decimal_string(v) << "\n";
  return out.str();
}

double objective_value(const QpInstance& inst, const Point& x) {
  if (static_cast<int>(x.coords.size()) != inst.n) throw Error("point dimension mismatch");
  double v = 0;
  for (auto& [i, d] : inst.diag) v += to_double(d) * x.coords[i - 1] * x.coords[i - 1];
  for (auto& [ij, a] : inst.offdiag) v += to_double(a) * x.coords[ij.first - 1] * x.coords[ij.second - 1];
  for (auto& [i, c] : inst.linear) v += to_double(c) * x.coords[i - 1];
  return v;
}

Rat objective_value(const QpInstance& inst, const std::vector<Rat>& x) {
  if (static_cast<int>(x.size()) != inst.n) throw Error("point dimension mismatch");
  Rat v = 0;
  for (auto& [i, d] : inst.diag) v += d * x[i - 1] * x[i - 1];
  for (auto& [ij, a] : inst.offdiag) v += a * x[ij.first - 1] * x[ij.second - 1];
  for (auto& [i, c] : inst.linear) v += c * x[i - 1];
  return v;
}

LoopGraph build_graph(const QpInstance& inst) {
  inst.validate();
  LoopGraph g;
  g.node_count = inst.n;
  for (auto& [ij, v] : inst.offdiag) {
    (void)v;
    g.edges.insert(ij);
  }
  for (auto& [i, d] : inst.diag) {
    if (d > 0)
      g.plus_loops.insert(i);
    else if (d < 0)
      g.minus_loops.insert(i);
  }
  return g;
}

}  // namespace qprelax
