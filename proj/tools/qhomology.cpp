#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qhom/cache.hpp"
#include "qhom/homology.hpp"
#include "qhom/lattice.hpp"
#include "qhom/poset.hpp"
#include "qhom/qcomb.hpp"
#include "qhom/qfield.hpp"
#include "qhom/verifier.hpp"

namespace {

using nlohmann::json;
using qhom::Backend;
using qhom::BigInt;
using qhom::Field;
using qhom::GridPoint;
using qhom::GroupElement;
using qhom::HomologyEngine;
using qhom::IndexPair;
using qhom::RankedPoset;
using qhom::VerificationReport;

struct Options {
  int64_t q = 2;
  int64_t p = 0;
  int64_t n = 0;
  int64_t k = 0;
  int64_t i = 0;
  int64_t s = 0;
  int64_t t = 0;
  int64_t nmax = 4;
  int64_t cap = 5000000;
  int64_t exponent = 0;
  int64_t boolean_n = -1;
  uint64_t seed = 12345;
  bool json_out = false;
  bool csv_out = false;
  bool basis = false;
  bool engine = false;
  std::string grid;
  std::string cache;
  std::string theorem = "all";
  std::string file;
};

std::string resolve_cache(const std::string& flag) {
  if (!flag.empty()) return flag;
  const char* env = std::getenv("QHOM_CACHE");
  return env == nullptr ? std::string() : std::string(env);
}

void check_cap(int64_t n, int64_t q, int64_t cap) {
  if (cap <= 0) throw std::invalid_argument("cap must be positive");
  for (int64_t j = 0; j <= n; ++j) {
    BigInt size = qhom::gauss_binomial(n, j, q);
    if (size > cap) {
      throw std::invalid_argument(
          "level " + std::to_string(j) + " holds " + size.get_str() +
          " subspaces, above the cap " + std::to_string(cap));
    }
  }
}

// Right-aligned text table with a left row-label column.
void print_table(std::ostream& os, const std::string& corner,
                 const std::vector<std::string>& col_heads,
                 const std::vector<std::string>& row_heads,
                 const std::vector<std::vector<std::string>>& cells) {
  size_t label_w = corner.size();
  for (const auto& r : row_heads) label_w = std::max(label_w, r.size());
  std::vector<size_t> width(col_heads.size());
  for (size_t c = 0; c < col_heads.size(); ++c) {
    width[c] = col_heads[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  os << std::setw(static_cast<int>(label_w)) << corner;
  for (size_t c = 0; c < col_heads.size(); ++c) {
    os << "  " << std::setw(static_cast<int>(width[c])) << col_heads[c];
  }
  os << "\n";
  for (size_t r = 0; r < row_heads.size(); ++r) {
    os << std::setw(static_cast<int>(label_w)) << row_heads[r];
    for (size_t c = 0; c < col_heads.size(); ++c) {
      os << "  " << std::setw(static_cast<int>(width[c])) << cells[r][c];
    }
    os << "\n";
  }
}

std::vector<std::pair<int64_t, int64_t>> sparse_entries(
    const std::vector<uint8_t>& v) {
  std::vector<std::pair<int64_t, int64_t>> out;
  for (size_t j = 0; j < v.size(); ++j) {
    if (v[j] != 0) out.emplace_back(static_cast<int64_t>(j), v[j]);
  }
  return out;
}

std::string sparse_string(const std::vector<uint8_t>& v) {
  std::ostringstream os;
  bool first = true;
  for (auto [idx, val] : sparse_entries(v)) {
    os << (first ? "" : " ") << idx << ":" << val;
    first = false;
  }
  return first ? "(zero)" : os.str();
}

json basis_json(const std::vector<std::vector<uint8_t>>& reps) {
  json arr = json::array();
  for (const auto& v : reps) {
    json vec = json::array();
    for (auto [idx, val] : sparse_entries(v)) vec.push_back({idx, val});
    arr.push_back(vec);
  }
  return arr;
}

int cmd_betti(const Options& o) {
  IndexPair base = IndexPair::make(o.n, 0, 1, o.p, o.q);
  int64_t m = base.m;
  struct Cell {
    int64_t k, i;
    BigInt value;
    bool middle;
  };
  std::vector<Cell> cells;
  for (int64_t i = 1; i < m; ++i) {
    for (int64_t k = 0; k <= o.n; ++k) {
      IndexPair pr = base.with(k, i);
      cells.push_back({k, i, qhom::betti_closed_form(pr),
                       qhom::is_middle_index(pr)});
    }
  }

  int64_t mismatches = 0;
  if (o.engine) {
    check_cap(o.n, o.q, o.cap);
    HomologyEngine eng(o.n, static_cast<uint32_t>(o.q), o.p,
                       Backend::parallel, resolve_cache(o.cache));
    for (const Cell& c : cells) {
      int64_t got = eng.homology(c.k, c.i).betti;
      if (c.value != got) {
        ++mismatches;
        std::cerr << "mismatch at (k=" << c.k << ", i=" << c.i
                  << "): closed form " << c.value.get_str() << ", engine "
                  << got << "\n";
      }
    }
  }

  if (o.json_out) {
    json out{{"command", "betti"}, {"q", o.q},       {"p", o.p},
             {"n", o.n},           {"m", m},         {"engine", o.engine},
             {"engine_mismatches", mismatches}};
    json entries = json::array();
    for (const Cell& c : cells) {
      entries.push_back({{"k", c.k},
                         {"i", c.i},
                         {"betti", c.value.get_str()},
                         {"middle", c.middle}});
    }
    out["entries"] = entries;
    std::cout << out.dump(2) << "\n";
  } else if (o.csv_out) {
    std::cout << "k,i,betti,middle\n";
    for (const Cell& c : cells) {
      std::cout << c.k << "," << c.i << "," << c.value.get_str() << ","
                << (c.middle ? 1 : 0) << "\n";
    }
  } else {
    std::cout << "betti table  q=" << o.q << " p=" << o.p << " n=" << o.n
              << " m=" << m << "\n";
    std::vector<std::string> col_heads, row_heads;
    for (int64_t k = 0; k <= o.n; ++k)
      col_heads.push_back("k=" + std::to_string(k));
    std::vector<std::vector<std::string>> grid;
    for (int64_t i = 1; i < m; ++i) {
      row_heads.push_back("i=" + std::to_string(i));
      std::vector<std::string> row;
      for (int64_t k = 0; k <= o.n; ++k) {
        const Cell& c = cells[static_cast<size_t>((i - 1) * (o.n + 1) + k)];
        row.push_back(c.middle ? "[" + c.value.get_str() + "]"
                               : c.value.get_str());
      }
      grid.push_back(std::move(row));
    }
    print_table(std::cout, "", col_heads, row_heads, grid);
    std::cout << "middle indices bracketed\n";
    if (o.engine) {
      std::cout << "engine cross-check: "
                << (mismatches == 0 ? "all " + std::to_string(cells.size()) +
                                          " positions match"
                                    : std::to_string(mismatches) +
                                          " mismatches")
                << "\n";
    }
  }
  return mismatches == 0 ? 0 : 1;
}

int cmd_homology(const Options& o) {
  IndexPair pr = IndexPair::make(o.n, o.k, o.i, o.p, o.q);
  check_cap(o.n, o.q, o.cap);
  HomologyEngine eng(o.n, static_cast<uint32_t>(o.q), o.p, Backend::parallel,
                     resolve_cache(o.cache));
  auto r = eng.homology(o.k, o.i);
  bool middle = qhom::is_middle_index(pr);
  const std::vector<std::vector<uint8_t>>* reps = nullptr;
  if (o.basis) reps = &eng.quotient_basis(o.k, o.i).rep_rows;

  if (o.json_out) {
    json out{{"command", "homology"},
             {"q", o.q},
             {"p", o.p},
             {"n", o.n},
             {"k", o.k},
             {"i", o.i},
             {"m", eng.m()},
             {"level_dim", eng.dim_level(o.k)},
             {"kernel", r.kernel_dim},
             {"image", r.image_dim},
             {"betti", r.betti},
             {"middle", middle}};
    if (reps != nullptr) out["basis"] = basis_json(*reps);
    std::cout << out.dump(2) << "\n";
  } else if (o.csv_out) {
    std::cout << "q,p,n,k,i,m,level_dim,kernel,image,betti,middle\n"
              << o.q << "," << o.p << "," << o.n << "," << o.k << "," << o.i
              << "," << eng.m() << "," << eng.dim_level(o.k) << ","
              << r.kernel_dim << "," << r.image_dim << "," << r.betti << ","
              << (middle ? 1 : 0) << "\n";
  } else {
    std::cout << "homology  q=" << o.q << " p=" << o.p << " n=" << o.n
              << "  position (k=" << o.k << ", i=" << o.i << ")  m="
              << eng.m() << "\n"
              << "level dimension: " << eng.dim_level(o.k) << "\n"
              << "kernel: " << r.kernel_dim << "\n"
              << "image: " << r.image_dim << "\n"
              << "betti: " << r.betti << "\n"
              << "middle index: " << (middle ? "yes" : "no") << "\n";
    if (reps != nullptr) {
      std::cout << "basis (" << reps->size() << " vectors, index:value over "
                << "the level enumeration)\n";
      for (const auto& v : *reps) std::cout << "  " << sparse_string(v) << "\n";
    }
  }
  return 0;
}

int cmd_rank(const Options& o) {
  IndexPair::make(o.n, 0, 1, o.p, 1);  // validates p prime and n >= 0
  if (o.s < 0 || o.s > o.n || o.t < 0 || o.t > o.n) {
    throw std::invalid_argument("levels -s and -t must lie in [0, n]");
  }
  Field F(static_cast<uint32_t>(o.q));
  check_cap(o.n, o.q, o.cap);
  int64_t a = std::min(o.s, o.t), b = std::max(o.s, o.t);
  auto M = qhom::containment_matrix(o.n, a, b, F, o.p);
  int64_t r = qhom::rank_mod_p(M);
  BigInt rows = qhom::gauss_binomial(o.n, o.s, o.q);
  BigInt cols = qhom::gauss_binomial(o.n, o.t, o.q);

  if (o.json_out) {
    json out{{"command", "rank"}, {"q", o.q},
             {"p", o.p},          {"n", o.n},
             {"s", o.s},          {"t", o.t},
             {"rows", rows.get_str()}, {"cols", cols.get_str()},
             {"rank", r}};
    std::cout << out.dump(2) << "\n";
  } else if (o.csv_out) {
    std::cout << "q,p,n,s,t,rows,cols,rank\n"
              << o.q << "," << o.p << "," << o.n << "," << o.s << "," << o.t
              << "," << rows.get_str() << "," << cols.get_str() << "," << r
              << "\n";
  } else {
    std::cout << "incidence rank  q=" << o.q << " p=" << o.p << " n=" << o.n
              << "  s=" << o.s << " t=" << o.t << "\n"
              << "containment matrix: " << rows.get_str() << " x "
              << cols.get_str() << "\n"
              << "rank mod " << o.p << ": " << r << "\n";
  }
  return 0;
}

int64_t alternating_fixed_sum(const HomologyEngine& e, int64_t k, int64_t i,
                              const GroupElement& g) {
  int64_t m = e.m(), acc = 0;
  for (int64_t j = 0; j <= e.n(); ++j) {
    int64_t rel = ((j - k) % m + m) % m;
    if (rel == 0) acc += e.fixed_points(j, g);
    if (rel == m - i) acc -= e.fixed_points(j, g);
  }
  return ((acc % e.p()) + e.p()) % e.p();
}

int cmd_character(const Options& o, bool have_k, bool have_i) {
  IndexPair base = IndexPair::make(o.n, 0, 1, o.p, o.q);
  int64_t m = base.m;
  if (have_k != have_i) {
    throw std::invalid_argument("give both -k and -i or neither");
  }
  check_cap(o.n, o.q, o.cap);
  HomologyEngine eng(o.n, static_cast<uint32_t>(o.q), o.p, Backend::parallel,
                     resolve_cache(o.cache));

  std::vector<std::pair<int64_t, int64_t>> pairs;
  if (have_k) {
    pairs.emplace_back(o.k, o.i);
  } else {
    for (int64_t k = 0; k <= o.n; ++k) {
      for (int64_t i = 1; i < m; ++i) {
        if (qhom::is_middle_index(base.with(k, i))) pairs.emplace_back(k, i);
      }
    }
  }

  Field F(static_cast<uint32_t>(o.q));
  std::vector<std::pair<std::string, GroupElement>> elements;
  auto matrix = [&](auto fill) {
    GroupElement g(static_cast<size_t>(o.n * o.n), 0);
    for (int64_t r = 0; r < o.n; ++r)
      for (int64_t c = 0; c < o.n; ++c)
        g[static_cast<size_t>(r * o.n + c)] = fill(r, c);
    return g;
  };
  elements.emplace_back("identity", matrix([](int64_t r, int64_t c) {
                          return r == c ? 1u : 0u;
                        }));
  if (o.q > 2 && o.n > 0) {
    elements.emplace_back("scalar(2)", matrix([](int64_t r, int64_t c) {
                            return r == c ? 2u : 0u;
                          }));
  }
  std::mt19937 rng(static_cast<uint32_t>(o.seed));
  for (int s = 1; s <= 3 && o.n > 0; ++s) {
    elements.emplace_back("random#" + std::to_string(s),
                          qhom::random_invertible(o.n, F, rng));
  }

  struct TraceRow {
    std::string name;
    std::vector<int64_t> fixed;
    std::vector<int64_t> traces;
    std::vector<int64_t> expected;
  };
  std::vector<TraceRow> rows;
  int64_t mismatches = 0;
  for (const auto& [name, g] : elements) {
    TraceRow row;
    row.name = name;
    for (int64_t j = 0; j <= o.n; ++j)
      row.fixed.push_back(eng.fixed_points(j, g));
    for (auto [k, i] : pairs) {
      int64_t tr = eng.homology_trace(k, i, g);
      int64_t want = alternating_fixed_sum(eng, k, i, g);
      row.traces.push_back(tr);
      row.expected.push_back(want);
      if (qhom::is_middle_index(base.with(k, i)) && tr != want) ++mismatches;
    }
    rows.push_back(std::move(row));
  }

  if (o.json_out) {
    json out{{"command", "character"}, {"q", o.q},   {"p", o.p},
             {"n", o.n},               {"m", m},     {"seed", o.seed},
             {"pass", mismatches == 0}};
    json els = json::array();
    for (const TraceRow& row : rows) {
      json traces = json::array();
      for (size_t t = 0; t < pairs.size(); ++t) {
        bool mid = qhom::is_middle_index(
            base.with(pairs[t].first, pairs[t].second));
        traces.push_back({{"k", pairs[t].first},
                          {"i", pairs[t].second},
                          {"trace", row.traces[t]},
                          {"alternating_sum", row.expected[t]},
                          {"middle", mid}});
      }
      els.push_back(
          {{"element", row.name}, {"fixed", row.fixed}, {"traces", traces}});
    }
    out["elements"] = els;
    std::cout << out.dump(2) << "\n";
  } else if (o.csv_out) {
    std::cout << "element,k,i,trace,alternating_sum,middle\n";
    for (const TraceRow& row : rows) {
      for (size_t t = 0; t < pairs.size(); ++t) {
        bool mid = qhom::is_middle_index(
            base.with(pairs[t].first, pairs[t].second));
        std::cout << row.name << "," << pairs[t].first << ","
                  << pairs[t].second << "," << row.traces[t] << ","
                  << row.expected[t] << "," << (mid ? 1 : 0) << "\n";
      }
    }
  } else {
    std::cout << "character  q=" << o.q << " p=" << o.p << " n=" << o.n
              << " m=" << m << "  seed=" << o.seed << "\n";
    std::vector<std::string> fixed_heads, names;
    for (int64_t j = 0; j <= o.n; ++j)
      fixed_heads.push_back("j=" + std::to_string(j));
    std::vector<std::vector<std::string>> fixed_cells;
    for (const TraceRow& row : rows) {
      names.push_back(row.name);
      std::vector<std::string> line;
      for (int64_t v : row.fixed) line.push_back(std::to_string(v));
      fixed_cells.push_back(std::move(line));
    }
    std::cout << "fixed subspaces per level\n";
    print_table(std::cout, "element", fixed_heads, names, fixed_cells);
    if (!pairs.empty()) {
      std::vector<std::string> pair_heads;
      for (auto [k, i] : pairs) {
        pair_heads.push_back("(" + std::to_string(k) + "," +
                             std::to_string(i) + ")");
      }
      std::vector<std::vector<std::string>> trace_cells;
      for (const TraceRow& row : rows) {
        std::vector<std::string> line;
        for (int64_t v : row.traces) line.push_back(std::to_string(v));
        trace_cells.push_back(std::move(line));
      }
      std::cout << "homology traces mod " << o.p << "\n";
      print_table(std::cout, "element", pair_heads, names, trace_cells);
    }
    std::cout << (mismatches == 0
                      ? "all middle-index traces equal their alternating "
                        "fixed-point sums"
                      : std::to_string(mismatches) +
                            " traces disagree with the alternating sums")
              << "\n";
  }
  return mismatches == 0 ? 0 : 1;
}

std::vector<GridPoint> parse_grid(const std::string& text) {
  std::map<std::string, std::vector<int64_t>> lists;
  std::istringstream segs(text);
  std::string seg;
  while (std::getline(segs, seg, ';')) {
    auto eq = seg.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("grid segment '" + seg +
                                  "' is not key=values");
    }
    std::string key = seg.substr(0, eq);
    std::istringstream vals(seg.substr(eq + 1));
    std::string v;
    while (std::getline(vals, v, ',')) {
      size_t used = 0;
      int64_t num = std::stoll(v, &used);
      if (used != v.size()) {
        throw std::invalid_argument("grid value '" + v + "' is not a number");
      }
      lists[key].push_back(num);
    }
  }
  for (const char* key : {"q", "p", "nmax"}) {
    if (lists[key].empty()) {
      throw std::invalid_argument(std::string("grid needs ") + key +
                                  "=... values");
    }
  }
  std::vector<GridPoint> grid;
  for (int64_t q : lists["q"]) {
    for (int64_t p : lists["p"]) {
      if (q % p == 0) {
        std::cerr << "note: skipping q=" << q << " p=" << p
                  << " (p divides q)\n";
        continue;
      }
      for (int64_t nmax : lists["nmax"]) grid.push_back({q, p, nmax});
    }
  }
  if (grid.empty()) throw std::invalid_argument("grid contains no valid point");
  return grid;
}

int cmd_verify(const Options& o, bool q_set, bool p_set, bool nmax_set) {
  static const std::set<std::string> known = {
      "all",         "middle-index", "almost-exact", "closed-form",
      "branching",   "duality",      "injectivity",  "trace-formula",
      "composition", "q1-limit",     "operator-law"};
  if (known.count(o.theorem) == 0) {
    std::string ids;
    for (const auto& s : known) ids += (ids.empty() ? "" : ", ") + s;
    throw std::invalid_argument("unknown property '" + o.theorem +
                                "' (choose one of: " + ids + ")");
  }
  auto want = [&](const char* id) {
    return o.theorem == "all" || o.theorem == id;
  };

  std::vector<GridPoint> grid;
  if (!o.grid.empty()) {
    grid = parse_grid(o.grid);
  } else if (q_set || p_set || nmax_set) {
    if (!p_set) throw std::invalid_argument("an explicit grid point needs -p");
    grid = {{o.q, o.p, o.nmax}};
  } else {
    grid = qhom::default_grid();
  }
  std::string cache = resolve_cache(o.cache);

  std::vector<VerificationReport> reports;
  std::set<std::pair<int64_t, int64_t>> limit_done;
  for (const GridPoint& g : grid) {
    IndexPair::make(0, 0, 1, g.p, g.q);  // reject bad (p, q) up front
    check_cap(g.n_max, g.q, o.cap);
    Backend b = Backend::parallel;
    if (want("middle-index"))
      reports.push_back(qhom::verify_middle_index(g.n_max, g.p, g.q, b, cache));
    if (want("almost-exact"))
      reports.push_back(qhom::verify_almost_exact(g.n_max, g.p, g.q, b, cache));
    if (want("closed-form"))
      reports.push_back(qhom::verify_closed_form(g.n_max, g.p, g.q, b, cache));
    if (want("branching"))
      reports.push_back(qhom::verify_branching(g.n_max, g.p, g.q, b, cache));
    if (want("duality"))
      reports.push_back(qhom::verify_duality(g.n_max, g.p, g.q, b, cache));
    if (want("injectivity"))
      reports.push_back(qhom::verify_injectivity(g.n_max, g.p, g.q, b, cache));
    if (want("trace-formula"))
      reports.push_back(
          qhom::verify_trace_formula(g.n_max, g.p, g.q, 5, o.seed, b, cache));
    if (want("composition")) {
      VerificationReport merged{"composition",
                                "q=" + std::to_string(g.q) +
                                    " p=" + std::to_string(g.p) +
                                    " n<=" + std::to_string(g.n_max),
                                0,
                                {},
                                {}};
      for (int64_t n = 0; n <= g.n_max; ++n) {
        VerificationReport one = qhom::verify_composition(n, g.p, g.q, b,
                                                          cache);
        merged.checked += one.checked;
        for (auto& f : one.failures) merged.failures.push_back(std::move(f));
        for (auto& note : one.notices) {
          merged.notices.push_back("n=" + std::to_string(n) + ": " + note);
        }
      }
      reports.push_back(std::move(merged));
    }
    if (want("q1-limit") && limit_done.insert({g.p, g.n_max}).second) {
      reports.push_back(qhom::verify_q1_limit(g.n_max, g.p));
    }
    if (want("operator-law"))
      reports.push_back(qhom::verify_operator_law(g.n_max, g.p, g.q, b, cache));
  }

  int64_t checked = 0, failures = 0;
  for (const auto& r : reports) {
    checked += r.checked;
    failures += r.failed();
  }

  if (o.json_out) {
    json out{{"command", "verify"},
             {"property", o.theorem},
             {"checked", checked},
             {"failures", failures},
             {"pass", failures == 0}};
    json reps = json::array();
    for (const auto& r : reports) reps.push_back(r.to_json());
    out["reports"] = reps;
    std::cout << out.dump(2) << "\n";
  } else if (o.csv_out) {
    std::cout << "property,grid,checked,failures\n";
    for (const auto& r : reports) {
      std::cout << r.property << "," << r.grid << "," << r.checked << ","
                << r.failed() << "\n";
    }
  } else {
    for (const auto& r : reports) {
      std::cout << (r.pass() ? "[pass] " : "[FAIL] ") << std::left
                << std::setw(14) << r.property << std::right << "  " << r.grid
                << "  checked=" << r.checked;
      if (!r.pass()) std::cout << " failures=" << r.failed();
      std::cout << "\n";
      for (const auto& f : r.failures) {
        std::cout << "       " << f.params << ": expected " << f.expected
                  << ", computed " << f.computed << "\n";
      }
      for (const auto& note : r.notices) {
        std::cout << "       note: " << note << "\n";
      }
    }
    std::cout << "summary: " << reports.size() << " reports, " << checked
              << " instances, " << failures << " failures\n";
  }
  return failures == 0 ? 0 : 1;
}

int cmd_poset(const Options& o, bool have_k, bool have_i) {
  if (!o.file.empty() && o.boolean_n >= 0) {
    throw std::invalid_argument(
        "give either a poset file or --boolean, not both");
  }
  if (o.file.empty() && o.boolean_n < 0) {
    throw std::invalid_argument("a poset file or --boolean N is required");
  }
  RankedPoset P;
  if (o.boolean_n >= 0) {
    BigInt widest = qhom::gauss_binomial(o.boolean_n, o.boolean_n / 2, 1);
    if (widest > o.cap) {
      throw std::invalid_argument("level " + std::to_string(o.boolean_n / 2) +
                                  " holds " + widest.get_str() +
                                  " subsets, above the cap " +
                                  std::to_string(o.cap));
    }
    P = qhom::boolean_lattice(o.boolean_n,
                              std::max<int64_t>(o.boolean_n, 20));
  } else {
    P = qhom::load_poset_file(o.file);
  }
  if (have_k != have_i) {
    throw std::invalid_argument("give both -k and -i or neither");
  }

  int64_t e = qhom::nilpotency_exponent(P, o.p);
  int64_t m = o.exponent > 0 ? o.exponent : e;

  struct Cell {
    int64_t k, i, kernel, image, dim;
  };
  std::vector<Cell> cells;
  std::vector<std::vector<uint8_t>> reps;
  if (have_k) {
    auto h = qhom::poset_homology(P, o.k, o.i, m, o.p, o.basis);
    cells.push_back({o.k, o.i, h.kernel_dim, h.image_dim, h.dim});
    reps = std::move(h.reps);
  } else {
    for (int64_t i = 1; i < m; ++i) {
      for (int64_t k = 0; k <= P.max_rank; ++k) {
        auto h = qhom::poset_homology(P, k, i, m, o.p);
        cells.push_back({k, i, h.kernel_dim, h.image_dim, h.dim});
      }
    }
  }

  std::vector<int64_t> level_sizes;
  for (int64_t k = 0; k <= P.max_rank; ++k)
    level_sizes.push_back(P.level_size(k));

  if (o.json_out) {
    json out{{"command", "poset"},   {"name", P.name},
             {"elements", P.size()}, {"level_sizes", level_sizes},
             {"p", o.p},             {"nilpotency", e},
             {"m", m}};
    json entries = json::array();
    for (const Cell& c : cells) {
      entries.push_back({{"k", c.k},
                         {"i", c.i},
                         {"kernel", c.kernel},
                         {"image", c.image},
                         {"dim", c.dim}});
    }
    out["entries"] = entries;
    if (o.basis && have_k) out["basis"] = basis_json(reps);
    std::cout << out.dump(2) << "\n";
  } else if (o.csv_out) {
    std::cout << "k,i,kernel,image,dim\n";
    for (const Cell& c : cells) {
      std::cout << c.k << "," << c.i << "," << c.kernel << "," << c.image
                << "," << c.dim << "\n";
    }
  } else {
    std::cout << "poset " << P.name << "  elements=" << P.size()
              << "  ranks 0.." << P.max_rank << "  level sizes:";
    for (int64_t s : level_sizes) std::cout << " " << s;
    std::cout << "\np=" << o.p << "  nilpotency exponent=" << e
              << "  step exponent m=" << m << "\n";
    if (have_k) {
      const Cell& c = cells.front();
      std::cout << "position (k=" << c.k << ", i=" << c.i
                << "): kernel=" << c.kernel << " image=" << c.image
                << " dim=" << c.dim << "\n";
      if (o.basis) {
        std::cout << "basis (" << reps.size() << " vectors, index:value over "
                  << "the level enumeration)\n";
        for (const auto& v : reps)
          std::cout << "  " << sparse_string(v) << "\n";
      }
    } else {
      std::vector<std::string> col_heads, row_heads;
      for (int64_t k = 0; k <= P.max_rank; ++k)
        col_heads.push_back("k=" + std::to_string(k));
      std::vector<std::vector<std::string>> grid;
      size_t at = 0;
      for (int64_t i = 1; i < m; ++i) {
        row_heads.push_back("i=" + std::to_string(i));
        std::vector<std::string> row;
        for (int64_t k = 0; k <= P.max_rank; ++k)
          row.push_back(std::to_string(cells[at++].dim));
        grid.push_back(std::move(row));
      }
      print_table(std::cout, "", col_heads, row_heads, grid);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{
      "qhomology: exact incidence homology of the subspace lattice of "
      "GF(q)^n with coefficients mod p, plus generic ranked posets"};
  app.require_subcommand(0, 1);

  auto add_output = [&](CLI::App* cmd) {
    auto* j = cmd->add_flag("--json", o.json_out, "emit JSON");
    auto* c = cmd->add_flag("--csv", o.csv_out, "emit CSV");
    j->excludes(c);
    c->excludes(j);
  };
  auto add_cap = [&](CLI::App* cmd) {
    cmd->add_option("--cap", o.cap, "largest allowed level size")
        ->capture_default_str();
  };
  auto add_cache = [&](CLI::App* cmd) {
    cmd->add_option("--cache", o.cache,
                    "boundary-matrix cache directory (overrides QHOM_CACHE)");
  };

  CLI::App* betti =
      app.add_subcommand("betti", "Betti-number table from the closed form");
  betti->add_option("-q", o.q, "order of the base field")
      ->capture_default_str();
  betti->add_option("-p", o.p, "coefficient prime")->required();
  betti->add_option("-n", o.n, "ambient dimension")->required();
  betti->add_flag("--engine", o.engine,
                  "cross-check every entry against the matrix engine");
  add_cap(betti);
  add_cache(betti);
  add_output(betti);

  CLI::App* hom = app.add_subcommand(
      "homology", "kernel, image, and betti at one position (k, i)");
  hom->add_option("-q", o.q, "order of the base field")->capture_default_str();
  hom->add_option("-p", o.p, "coefficient prime")->required();
  hom->add_option("-n", o.n, "ambient dimension")->required();
  hom->add_option("-k", o.k, "level")->required();
  hom->add_option("-i", o.i, "step index")->required();
  hom->add_flag("--basis", o.basis, "print representative cycles");
  add_cap(hom);
  add_cache(hom);
  add_output(hom);

  CLI::App* verify = app.add_subcommand(
      "verify", "check the dimension and trace identities on a grid");
  verify->add_option("theorem", o.theorem,
                     "property id or 'all' (middle-index, almost-exact, "
                     "closed-form, branching, duality, injectivity, "
                     "trace-formula, composition, q1-limit, operator-law)")
      ->capture_default_str();
  auto* vq = verify->add_option("-q", o.q, "base field order for one point");
  auto* vp = verify->add_option("-p", o.p, "coefficient prime for one point");
  auto* vn =
      verify->add_option("--nmax", o.nmax, "largest ambient dimension")
          ->capture_default_str();
  auto* vg = verify->add_option(
      "--grid", o.grid, "explicit grid, e.g. \"q=2,3;p=3,7;nmax=4\"");
  vg->excludes(vq);
  vg->excludes(vp);
  vg->excludes(vn);
  verify->add_option("--seed", o.seed, "seed for sampled group elements")
      ->capture_default_str();
  add_cap(verify);
  add_cache(verify);
  add_output(verify);

  CLI::App* poset = app.add_subcommand(
      "poset", "homology of a ranked poset from a file or generator");
  poset->add_option("file", o.file, "poset description file");
  poset->add_option("--boolean", o.boolean_n,
                    "use the subset lattice of an N-element set");
  poset->add_option("-p", o.p, "coefficient prime")->required();
  poset->add_option("-k", o.k, "level (with -i: report one position)");
  poset->add_option("-i", o.i, "step index");
  poset->add_option("--exponent", o.exponent,
                    "step exponent m (default: nilpotency exponent)");
  poset->add_flag("--basis", o.basis,
                  "print representative cycles (single position only)");
  add_cap(poset);
  add_output(poset);

  CLI::App* character = app.add_subcommand(
      "character", "fixed-point counts and homology traces of group elements");
  character->add_option("-q", o.q, "order of the base field")
      ->capture_default_str();
  character->add_option("-p", o.p, "coefficient prime")->required();
  character->add_option("-n", o.n, "ambient dimension")->required();
  character->add_option("-k", o.k, "level (with -i: one position)");
  character->add_option("-i", o.i, "step index");
  character->add_option("--seed", o.seed, "seed for random elements")
      ->capture_default_str();
  add_cap(character);
  add_cache(character);
  add_output(character);

  CLI::App* rank = app.add_subcommand(
      "rank", "rank mod p of the containment matrix between two levels");
  rank->add_option("-q", o.q, "order of the base field")
      ->capture_default_str();
  rank->add_option("-p", o.p, "coefficient prime")->required();
  rank->add_option("-n", o.n, "ambient dimension")->required();
  rank->add_option("-s", o.s, "row level")->required();
  rank->add_option("-t", o.t, "column level")->required();
  add_cap(rank);
  add_output(rank);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (betti->parsed()) return cmd_betti(o);
    if (hom->parsed()) return cmd_homology(o);
    if (verify->parsed()) {
      return cmd_verify(o, vq->count() > 0, vp->count() > 0, vn->count() > 0);
    }
    if (poset->parsed()) {
      return cmd_poset(o, poset->count("-k") > 0, poset->count("-i") > 0);
    }
    if (character->parsed()) {
      return cmd_character(o, character->count("-k") > 0,
                           character->count("-i") > 0);
    }
    if (rank->parsed()) return cmd_rank(o);
    std::cout << app.help();
    return 0;
  } catch (const qhom::integrity_error& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
