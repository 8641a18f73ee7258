#include "lpkit/mps.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace lpkit {

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw std::runtime_error("mps line " + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_num(const std::string& tok, int line_no) {
  const char* b = tok.data();
  const char* e = b + tok.size();
  double v = 0.0;
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) fail(line_no, "bad number '" + tok + "'");
  return v;
}

// Shortest decimal that parses back to the same double.
std::string format_num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

enum class Section { kNone, kRows, kColumns, kRhs, kRanges, kBounds, kDone };

// Search for a range value whose reconstruction reproduces the derived bound
// exactly. reconstruct(r) must be monotone in r (lb + r or ub - r).
template <class F>
bool exact_range(F reconstruct, double target, double r0, double* out) {
  double r = r0;
  for (int k = 0; k < 8; ++k) {
    double got = reconstruct(r);
    if (got == target) {
      *out = r;
      return true;
    }
    r = std::nextafter(r, got < target ? kInfinity : -kInfinity);
  }
  return false;
}

// How a constraint row goes out: type, rhs, optional range, and for the rare
// ranged row that no rhs+range pair reconstructs exactly, an out-of-band
// upper bound hint (written as a comment standard readers skip).
struct RowEmit {
  char type = 'N';
  double rhs = 0.0;
  bool has_range = false;
  double range = 0.0;
  bool hint = false;
  double hint_ub = 0.0;
};

RowEmit plan_row(double lb, double ub) {
  RowEmit e;
  if (!is_finite(lb) && !is_finite(ub)) {
    e.type = 'N';
  } else if (is_finite(lb) && is_finite(ub) && lb == ub) {
    e.type = 'E';
    e.rhs = lb;
  } else if (is_finite(lb) && is_finite(ub)) {
    double r = 0.0;
    if (exact_range([&](double x) { return lb + x; }, ub, ub - lb, &r)) {
      e.type = 'G';
      e.rhs = lb;
    } else if (exact_range([&](double x) { return ub - x; }, lb, ub - lb, &r)) {
      e.type = 'L';
      e.rhs = ub;
    } else {
      e.type = 'G';
      e.rhs = lb;
      r = ub - lb;
      e.hint = true;
      e.hint_ub = ub;
    }
    e.has_range = true;
    e.range = r;
  } else if (is_finite(lb)) {
    e.type = 'G';
    e.rhs = lb;
  } else {
    e.type = 'L';
    e.rhs = ub;
  }
  return e;
}

struct RowInfo {
  char type = 'N';
  int index = -1;  // -1 for the objective row
  double rhs = 0.0;
  bool has_range = false;
  double range = 0.0;
};

}  // namespace

LPProblem read_mps(std::istream& in) {
  LPProblem lp;
  std::map<std::string, RowInfo> rows;
  std::map<std::string, int> cols;
  std::string obj_row_name;
  double obj_rhs = 0.0;
  // Tracks whether a column's lower bound is still the default 0, for the
  // classic rule that a negative UP bound on such a column frees the lower.
  std::vector<char> lb_default;

  Section section = Section::kNone;
  std::string line;
  int line_no = 0;
  bool saw_endata = false;

  auto get_col = [&](const std::string& name) {
    auto it = cols.find(name);
    if (it != cols.end()) return it->second;
    int j = lp.add_col(0.0, kInfinity, 0.0);
    cols.emplace(name, j);
    lb_default.push_back(1);
    return j;
  };

  // Exact upper bounds for ranged rows whose rhs+range encoding rounds off
  // the last ulp; emitted by write_mps as comments other readers skip.
  std::map<std::string, double> ub_hints;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '*') {
      auto toks = tokenize(line.substr(1));
      if (toks.size() == 3 && toks[0] == "XUB") ub_hints[toks[1]] = parse_num(toks[2], line_no);
      continue;
    }
    auto toks = tokenize(line);
    if (toks.empty()) continue;

    bool header = !line.empty() && line[0] != ' ' && line[0] != '\t';
    if (header) {
      const std::string& h = toks[0];
      if (h == "NAME") continue;
      if (h == "ROWS") { section = Section::kRows; continue; }
      if (h == "COLUMNS") { section = Section::kColumns; continue; }
      if (h == "RHS") { section = Section::kRhs; continue; }
      if (h == "RANGES") { section = Section::kRanges; continue; }
      if (h == "BOUNDS") { section = Section::kBounds; continue; }
      if (h == "ENDATA") { saw_endata = true; break; }
      if (h == "OBJSENSE" || h == "MAXIMIZE" || h == "MINIMIZE" || h == "MIN" || h == "MAX")
        fail(line_no, "unsupported section '" + h + "'");
      fail(line_no, "unknown section '" + h + "'");
    }

    switch (section) {
      case Section::kRows: {
        if (toks.size() != 2) fail(line_no, "ROWS entry needs type and name");
        char t = static_cast<char>(std::toupper(static_cast<unsigned char>(toks[0][0])));
        if (toks[0].size() != 1 || (t != 'N' && t != 'L' && t != 'G' && t != 'E'))
          fail(line_no, "bad row type '" + toks[0] + "'");
        if (rows.count(toks[1])) fail(line_no, "duplicate row '" + toks[1] + "'");
        RowInfo info;
        info.type = t;
        if (t == 'N' && obj_row_name.empty()) {
          obj_row_name = toks[1];
        } else {
          // N rows after the first are free constraint rows.
          double lb = -kInfinity, ub = kInfinity;
          if (t == 'G') lb = 0.0;
          if (t == 'L') ub = 0.0;
          if (t == 'E') { lb = 0.0; ub = 0.0; }
          info.index = lp.add_row(lb, ub);
        }
        rows.emplace(toks[1], info);
        break;
      }
      case Section::kColumns: {
        if (toks.size() != 3 && toks.size() != 5) fail(line_no, "COLUMNS entry needs 3 or 5 fields");
        int j = get_col(toks[0]);
        for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
          auto it = rows.find(toks[k]);
          if (it == rows.end()) fail(line_no, "unknown row '" + toks[k] + "'");
          double v = parse_num(toks[k + 1], line_no);
          if (it->first == obj_row_name) lp.set_obj(j, v);
          else lp.set_coef(it->second.index, j, v);
        }
        break;
      }
      case Section::kRhs: {
        if (toks.size() != 3 && toks.size() != 5) fail(line_no, "RHS entry needs 3 or 5 fields");
        for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
          auto it = rows.find(toks[k]);
          if (it == rows.end()) fail(line_no, "unknown row '" + toks[k] + "'");
          double v = parse_num(toks[k + 1], line_no);
          if (it->first == obj_row_name) obj_rhs = v;
          else if (it->second.type != 'N') it->second.rhs = v;
        }
        break;
      }
      case Section::kRanges: {
        if (toks.size() != 3 && toks.size() != 5) fail(line_no, "RANGES entry needs 3 or 5 fields");
        for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
          auto it = rows.find(toks[k]);
          if (it == rows.end() || it->second.type == 'N') fail(line_no, "bad range row '" + toks[k] + "'");
          it->second.has_range = true;
          it->second.range = parse_num(toks[k + 1], line_no);
        }
        break;
      }
      case Section::kBounds: {
        if (toks.size() < 3) fail(line_no, "BOUNDS entry too short");
        const std::string& bt = toks[0];
        int j = get_col(toks[2]);
        double lb = lp.col_lower(j), ub = lp.col_upper(j);
        if (bt == "LO" || bt == "UP" || bt == "FX") {
          if (toks.size() != 4) fail(line_no, "bound '" + bt + "' needs a value");
          double v = parse_num(toks[3], line_no);
          if (bt == "LO") { lb = v; lb_default[j] = 0; }
          if (bt == "UP") {
            ub = v;
            if (v < 0 && lb_default[j]) lb = -kInfinity;
          }
          if (bt == "FX") { lb = v; ub = v; lb_default[j] = 0; }
        } else if (bt == "FR") {
          lb = -kInfinity; ub = kInfinity; lb_default[j] = 0;
        } else if (bt == "MI") {
          lb = -kInfinity; lb_default[j] = 0;
        } else if (bt == "PL") {
          ub = kInfinity;
        } else {
          fail(line_no, "unsupported bound type '" + bt + "'");
        }
        lp.set_col_bounds(j, lb, ub);
        break;
      }
      default:
        fail(line_no, "data before any section header");
    }
  }
  if (!saw_endata) throw std::runtime_error("mps: missing ENDATA");

  // Apply RHS and RANGES to the accumulated row types.
  for (const auto& [name, info] : rows) {
    if (info.type == 'N') continue;  // objective or free row, bounds already set
    double lb = -kInfinity, ub = kInfinity;
    switch (info.type) {
      case 'L': ub = info.rhs; break;
      case 'G': lb = info.rhs; break;
      case 'E': lb = info.rhs; ub = info.rhs; break;
    }
    if (info.has_range) {
      double r = info.range;
      switch (info.type) {
        case 'L': lb = ub - std::abs(r); break;
        case 'G': ub = lb + std::abs(r); break;
        case 'E':
          if (r >= 0) ub = lb + r;
          else lb = ub + r;
          break;
      }
    }
    auto hint = ub_hints.find(name);
    if (hint != ub_hints.end()) ub = hint->second;
    lp.set_row_bounds(info.index, lb, ub);
  }
  lp.set_obj_offset(-obj_rhs);
  return lp;
}

LPProblem read_mps_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_mps(in);
}

void write_mps(const LPProblem& lp, std::ostream& out, const std::string& name) {
  out << "NAME " << name << "\n";
  out << "ROWS\n";
  out << " N COST\n";
  // Every constraint goes out as a typed row derived from its bounds; slot
  // indices name the rows so ordering survives the round trip.
  std::vector<RowEmit> plan(lp.row_limit());
  for (int i = 0; i < lp.row_limit(); ++i) {
    if (!lp.row_active(i)) continue;
    plan[i] = plan_row(lp.row_lower(i), lp.row_upper(i));
    out << " " << plan[i].type << " R" << i << "\n";
  }
  out << "COLUMNS\n";
  for (int j = 0; j < lp.col_limit(); ++j) {
    if (!lp.col_active(j)) continue;
    if (lp.obj(j) != 0.0) out << " C" << j << " COST " << format_num(lp.obj(j)) << "\n";
    for (const MatrixEntry& e : lp.col(j))
      out << " C" << j << " R" << e.index << " " << format_num(e.value) << "\n";
    if (lp.obj(j) == 0.0 && lp.col(j).empty())
      out << " C" << j << " COST 0\n";  // keep empty columns visible to the reader
  }
  out << "RHS\n";
  if (lp.obj_offset() != 0.0) out << " RHS COST " << format_num(-lp.obj_offset()) << "\n";
  for (int i = 0; i < lp.row_limit(); ++i) {
    if (!lp.row_active(i) || plan[i].type == 'N') continue;
    if (plan[i].rhs != 0.0) out << " RHS R" << i << " " << format_num(plan[i].rhs) << "\n";
  }
  out << "RANGES\n";
  for (int i = 0; i < lp.row_limit(); ++i) {
    if (!lp.row_active(i) || !plan[i].has_range) continue;
    out << " RNG R" << i << " " << format_num(plan[i].range) << "\n";
    if (plan[i].hint) out << "*XUB R" << i << " " << format_num(plan[i].hint_ub) << "\n";
  }
  out << "BOUNDS\n";
  for (int j = 0; j < lp.col_limit(); ++j) {
    if (!lp.col_active(j)) continue;
    double lb = lp.col_lower(j), ub = lp.col_upper(j);
    if (is_finite(lb) && is_finite(ub) && lb == ub) {
      out << " FX BND C" << j << " " << format_num(lb) << "\n";
      continue;
    }
    if (!is_finite(lb) && !is_finite(ub)) {
      out << " FR BND C" << j << "\n";
      continue;
    }
    if (is_finite(lb)) {
      // Explicit LO when ub < 0 so the reader's negative-UP rule cannot fire.
      if (lb != 0.0 || (is_finite(ub) && ub < 0)) out << " LO BND C" << j << " " << format_num(lb) << "\n";
    } else {
      out << " MI BND C" << j << "\n";
    }
    if (is_finite(ub)) out << " UP BND C" << j << " " << format_num(ub) << "\n";
  }
  out << "ENDATA\n";
}

void write_mps_file(const LPProblem& lp, const std::string& path, const std::string& name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_mps(lp, out, name);
}

}  // namespace lpkit
