#include "chainmetric/io.hpp"

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "chainmetric/generators.hpp"
#include "chainmetric/util.hpp"

namespace chainmetric {

namespace {

constexpr char kMagic[4] = {'D', 'M', 'X', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

void put_f64(std::ostream& os, double d) {
  put_u64(os, std::bit_cast<std::uint64_t>(d));
}

double get_f64(std::istream& is) {
  return std::bit_cast<double>(get_u64(is));
}

}  // namespace

void write_matrix(const std::string& path, const DistanceMatrix& m) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write(kMagic, 4);
  put_u64(os, m.size());
  std::size_t n = m.size();
  for (PointId i = 0; i < n; ++i)
    for (PointId j = i; j < n; ++j) put_f64(os, m.raw(i, j));
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path);
}

DistanceMatrix read_matrix(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != std::string(kMagic, 4))
    throw std::runtime_error("not a DMX1 file: " + path);
  std::uint64_t n = get_u64(is);
  if (!is) throw std::runtime_error("truncated header: " + path);
  DistanceMatrix m(n);  // refuses absurd sizes before any entry is read
  try {
    for (PointId i = 0; i < n; ++i)
      for (PointId j = i; j < n; ++j) {
        double v = get_f64(is);
        if (!is) throw std::runtime_error("truncated entries");
        if (i == j) {
          if (v != 0.0) throw std::runtime_error("nonzero diagonal entry");
        } else {
          m.set(i, j, v);
        }
      }
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("bad DMX1 file ") + path + ": " +
                             e.what());
  }
  is.peek();
  if (!is.eof())
    throw std::runtime_error("trailing data in DMX1 file: " + path);
  return m;
}

void write_matrix_csv(const std::string& path, const DistanceMatrix& m) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  std::size_t n = m.size();
  for (PointId i = 0; i < n; ++i) {
    for (PointId j = 0; j < n; ++j) {
      if (j) os << ',';
      os << fmt17(m.raw(i, j));
    }
    os << '\n';
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

namespace {

nlohmann::ordered_json point_to_json(const FiniteMetricSpace& s, PointId id) {
  nlohmann::ordered_json pj;
  pj["id"] = id;
  auto coords = nlohmann::ordered_json::array();
  for (const auto& [idx, v] : s.point(id).coords())
    coords.push_back({idx, v});
  pj["coords"] = std::move(coords);
  return pj;
}

}  // namespace

void save_space(const std::string& path, const FiniteMetricSpace& s,
                const std::string& matrix_file) {
  nlohmann::ordered_json j;
  j["generator"] = s.generator();
  j["params"] = s.params();
  j["metric_kind"] = to_string(s.kind());

  if (s.kind() == MetricKind::matrix && !s.matrix() && s.generator().empty())
    throw std::runtime_error(
        "save_space: oracle-backed space without a generator cannot be "
        "reloaded");

  std::map<PointId, std::vector<std::string>> labels;
  for (const auto& [name, id] : s.landmarks()) labels[id].push_back(name);

  auto points = nlohmann::ordered_json::array();
  for (PointId id = 0; id < s.size(); ++id) {
    auto pj = point_to_json(s, id);
    if (auto it = labels.find(id); it != labels.end()) {
      if (it->second.size() == 1)
        pj["label"] = it->second.front();
      else
        pj["labels"] = it->second;
    }
    if (!s.metas().empty()) {
      const PointMeta& m = s.meta(id);
      pj["meta"] = {{"piece", m.piece}, {"segment", m.segment}, {"t", m.t}};
    }
    points.push_back(std::move(pj));
  }
  j["points"] = std::move(points);

  if (s.matrix()) {
    std::filesystem::path jp(path);
    std::filesystem::path mp =
        matrix_file.empty() ? jp.filename().replace_extension(".dmx")
                            : std::filesystem::path(matrix_file);
    j["matrix_file"] = mp.string();
    write_matrix((jp.parent_path() / mp).string(), *s.matrix());
  }

  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << j.dump(2) << '\n';
  if (!os) throw std::runtime_error("write failed: " + path);
}

FiniteMetricSpace load_space(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j = nlohmann::json::parse(is);

  std::string generator = j.value("generator", std::string());
  nlohmann::json params = j.value("params", nlohmann::json::object());
  MetricKind kind = metric_kind_from_string(j.at("metric_kind"));

  std::vector<SparsePoint> pts;
  std::map<std::string, PointId> lms;
  std::vector<PointMeta> meta;
  bool any_meta = false;
  if (j.contains("points")) {
    const auto& arr = j.at("points");
    pts.reserve(arr.size());
    meta.reserve(arr.size());
    for (const auto& pj : arr) {
      PointId id = pj.at("id").get<PointId>();
      if (id != pts.size())
        throw std::runtime_error("space file: point ids must be 0..n-1 in "
                                 "order");
      std::vector<SparsePoint::Coord> cs;
      for (const auto& c : pj.at("coords"))
        cs.push_back({c.at(0).get<std::uint32_t>(), c.at(1).get<double>()});
      pts.push_back(SparsePoint::make(std::move(cs)));
      if (pj.contains("label")) lms[pj.at("label").get<std::string>()] = id;
      if (pj.contains("labels"))
        for (const auto& name : pj.at("labels"))
          lms[name.get<std::string>()] = id;
      PointMeta pm;
      if (pj.contains("meta")) {
        const auto& mj = pj.at("meta");
        pm.piece = mj.at("piece").get<std::int32_t>();
        pm.segment = mj.at("segment").get<std::int32_t>();
        pm.t = mj.at("t").get<double>();
        any_meta = true;
      }
      meta.push_back(pm);
    }
  }
  if (!any_meta) meta.clear();

  // sample spacing travels inside params by convention
  double resolution = 0.0;
  if (params.contains("h")) resolution = params["h"].get<double>();

  if (kind != MetricKind::matrix)
    return FiniteMetricSpace::coordinate_space(kind, std::move(pts),
                                               std::move(lms), std::move(meta),
                                               resolution, generator, params);

  if (j.contains("matrix_file")) {
    std::filesystem::path mp(j.at("matrix_file").get<std::string>());
    if (mp.is_relative())
      mp = std::filesystem::path(path).parent_path() / mp;
    auto m = std::make_shared<DistanceMatrix>(read_matrix(mp.string()));
    return FiniteMetricSpace::matrix_space(std::move(m), std::move(pts),
                                           std::move(lms), std::move(meta),
                                           resolution, generator, params);
  }

  // oracle-backed space: re-generate (generation is deterministic)
  if (generator.empty())
    throw std::runtime_error("space file has neither matrix_file nor "
                             "generator: " + path);
  FiniteMetricSpace s = generate_named(generator, params);
  if (!pts.empty() && s.size() != pts.size())
    throw std::runtime_error("space file: re-generated size disagrees with "
                             "stored points: " + path);
  return s;
}

}  // namespace chainmetric
