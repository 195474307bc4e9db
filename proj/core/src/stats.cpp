#include "egonet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "text.hpp"

namespace egonet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SummaryStat summary_of(std::string name, const std::vector<double>& v) {
  SummaryStat s{std::move(name), v.size(), kNaN, kNaN};
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  s.median = median(v);
  return s;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

double FractionStat::percent() const {
  return base == 0 ? kNaN : 100.0 * static_cast<double>(count) / static_cast<double>(base);
}

const FractionStat& TypeStats::fraction(std::string_view name) const {
  for (const auto& f : fractions) {
    if (f.name == name) return f;
  }
  throw StatsError("no fraction statistic named " + std::string(name));
}

const SummaryStat& TypeStats::summary(std::string_view name) const {
  for (const auto& s : summaries) {
    if (s.name == name) return s;
  }
  throw StatsError("no summary statistic named " + std::string(name));
}

double median(std::vector<double> values) {
  if (values.empty()) return kNaN;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

TypeStats summarize(UserType type, std::span<const LocalIndices> users) {
  if (users.empty()) throw StatsError("no users of type " + std::string(to_string(type)));
  TypeStats st;
  st.type = type;
  st.users = users.size();

  std::size_t k1 = 0, s1 = 0, s2 = 0, spk1 = 0, k2 = 0, sp1 = 0, sp_inv_k = 0, wsp1 = 0, wsp_inv_s = 0, c0 = 0,
              tr2 = 0, m0 = 0, m1 = 0, tri = 0, cyp0 = 0;
  std::vector<double> k_cond, s_cond, spk_cond, c_cond, m_cond, cyp_cond;
  for (const LocalIndices& u : users) {
    if (u.k == 1) k1 += 1;
    if (u.s == 1) s1 += 1;
    if (u.s >= 2) {
      s2 += 1;
      s_cond.push_back(static_cast<double>(u.s));
      if (is_one(u.spk)) spk1 += 1;
      if (u.wsp && is_one(*u.wsp)) wsp1 += 1;
      if (u.s_out == 1) wsp_inv_s += 1;
    }
    if (u.spk > Rational{1}) spk_cond.push_back(to_double(u.spk));
    if (u.k >= 2) {
      k2 += 1;
      k_cond.push_back(static_cast<double>(u.k));
      if (u.sp && is_one(*u.sp)) sp1 += 1;
      if (u.k_out * u.k == u.k_in + u.k_out) sp_inv_k += 1;
      if (u.tr == 0) c0 += 1;
    }
    if (u.c && is_positive(*u.c)) c_cond.push_back(to_double(*u.c));
    if (u.m) {
      tr2 += 1;
      m_cond.push_back(to_double(*u.m));
      if (is_zero(*u.m)) m0 += 1;
      if (is_one(*u.m)) m1 += 1;
    }
    if (u.cyp) {
      tri += 1;
      if (is_zero(*u.cyp)) {
        cyp0 += 1;
      } else {
        cyp_cond.push_back(to_double(*u.cyp));
      }
    }
  }
  const std::size_t all = users.size();
  st.fractions = {
      {"k=1", "all", k1, all},           {"s=1", "all", s1, all},
      {"s/k=1", "s>=2", spk1, s2},       {"SP=1", "k>=2", sp1, k2},
      {"SP=1/k", "k>=2", sp_inv_k, k2},  {"WSP=1", "s>=2", wsp1, s2},
      {"WSP=1/s", "s>=2", wsp_inv_s, s2}, {"C=0", "k>=2", c0, k2},
      {"m=0", "Tr>=2", m0, tr2},         {"m=1", "Tr>=2", m1, tr2},
      {"CYP=0", "FF+CY>=1", cyp0, tri},
  };
  st.summaries = {
      summary_of("k|k>=2", k_cond),    summary_of("s|s>=2", s_cond), summary_of("s/k|s/k>1", spk_cond),
      summary_of("C|C>0", c_cond),     summary_of("m|Tr>=2", m_cond), summary_of("CYP|CYP>0", cyp_cond),
  };
  return st;
}

std::vector<TypeStats> descriptive_stats(std::span<const IndexedNode> nodes) {
  std::map<UserType, std::vector<LocalIndices>> by_type;
  for (const IndexedNode& n : nodes) {
    if (n.type) by_type[*n.type].push_back(n.indices);
  }
  if (by_type.empty()) throw StatsError("no labeled users");
  std::vector<TypeStats> out;
  for (const auto& [type, users] : by_type) out.push_back(summarize(type, users));
  return out;
}

std::vector<std::pair<double, double>> survival_points(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<std::pair<double, double>> pts;
  const auto n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    pts.emplace_back(values[i], static_cast<double>(values.size() - j) / n);
    i = j;
  }
  return pts;
}

std::vector<Series> survival_series(std::span<const LocalIndices> users) {
  std::vector<Series> s = {{"k", {}},   {"k_ge_2", {}}, {"s", {}}, {"s_ge_2", {}},   {"s_over_k", {}},
                           {"s_over_k_gt_1", {}},       {"sp", {}}, {"wsp", {}},   {"c", {}},
                           {"c_gt_0", {}}, {"m", {}},   {"cyp", {}}, {"cyp_gt_0", {}}};
  auto at = [&](std::size_t i) -> std::vector<double>& { return s[i].values; };
  for (const LocalIndices& u : users) {
    const double spk = to_double(u.spk);
    at(0).push_back(static_cast<double>(u.k));
    if (u.k >= 2) at(1).push_back(static_cast<double>(u.k));
    at(2).push_back(static_cast<double>(u.s));
    if (u.s >= 2) at(3).push_back(static_cast<double>(u.s));
    at(4).push_back(spk);
    if (spk > 1.0) at(5).push_back(spk);
    if (u.sp) at(6).push_back(to_double(*u.sp));
    if (u.wsp) at(7).push_back(to_double(*u.wsp));
    if (u.c) {
      at(8).push_back(to_double(*u.c));
      if (is_positive(*u.c)) at(9).push_back(to_double(*u.c));
    }
    if (u.m) at(10).push_back(to_double(*u.m));
    if (u.cyp) {
      at(11).push_back(to_double(*u.cyp));
      if (is_positive(*u.cyp)) at(12).push_back(to_double(*u.cyp));
    }
  }
  return s;
}

std::vector<Scatter> scatter_sets(std::span<const LocalIndices> users) {
  std::vector<Scatter> out = {{"k_vs_sp", {}}, {"s_vs_wsp", {}}, {"s_vs_m", {}}, {"wsp_vs_m", {}}, {"c_vs_m", {}}};
  for (const LocalIndices& u : users) {
    const auto k = static_cast<double>(u.k);
    const auto s = static_cast<double>(u.s);
    if (u.sp) out[0].points.emplace_back(k, to_double(*u.sp));
    if (u.wsp) out[1].points.emplace_back(s, to_double(*u.wsp));
    if (u.m) {
      const double m = to_double(*u.m);
      out[2].points.emplace_back(s, m);
      if (u.wsp) out[3].points.emplace_back(to_double(*u.wsp), m);
      if (u.c) out[4].points.emplace_back(to_double(*u.c), m);
    }
  }
  return out;
}

void write_stats_report(const std::filesystem::path& dir, std::span<const IndexedNode> nodes) {
  const std::vector<TypeStats> stats = descriptive_stats(nodes);
  std::filesystem::create_directories(dir / "survival");
  std::filesystem::create_directories(dir / "scatter");

  auto table = open_out(dir / "table.csv");
  table << "user_type,statistic,base,count,base_count,percent\n";
  auto summary = open_out(dir / "summary.csv");
  summary << "user_type,statistic,n,mean,median\n";
  for (const TypeStats& st : stats) {
    const std::string_view type = to_string(st.type);
    table << type << ",users,all," << st.users << ',' << st.users << ",100\n";
    for (const FractionStat& f : st.fractions) {
      table << type << ',' << f.name << ',' << f.base_name << ',' << f.count << ',' << f.base << ','
            << detail::format_real(f.percent()) << '\n';
    }
    for (const SummaryStat& s : st.summaries) {
      summary << type << ',' << s.name << ',' << s.n << ',' << detail::format_real(s.mean) << ','
              << detail::format_real(s.median) << '\n';
    }
  }

  std::map<UserType, std::vector<LocalIndices>> by_type;
  for (const IndexedNode& n : nodes) {
    if (n.type) by_type[*n.type].push_back(n.indices);
  }
  for (const auto& [type, users] : by_type) {
    const std::string prefix(to_string(type));
    for (Series& s : survival_series(users)) {
      auto out = open_out(dir / "survival" / (prefix + "_" + s.name + ".csv"));
      out << "x,y\n";
      for (const auto& [x, y] : survival_points(std::move(s.values))) {
        out << detail::format_real(x) << ',' << detail::format_real(y) << '\n';
      }
    }
    for (const Scatter& sc : scatter_sets(users)) {
      auto out = open_out(dir / "scatter" / (prefix + "_" + sc.name + ".csv"));
      out << "x,y\n";
      for (const auto& [x, y] : sc.points) out << detail::format_real(x) << ',' << detail::format_real(y) << '\n';
    }
  }
}

}  // namespace egonet
