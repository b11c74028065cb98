#include "pf/report_io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pf {

namespace {

// %.17g round-trips doubles and keeps reports byte-stable.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json num(double v) {
  // serialize through the shortest round-trip text nlohmann uses for doubles
  return json(v);
}

}  // namespace

json to_json(const StructureReport& rep) {
  json j;
  j["axiom"] = rep.axiom;
  j["sample_count"] = rep.sample_count;
  json fc = json::object();
  for (const auto& [k, v] : rep.fitted_constants) fc[k] = num(v);
  j["fitted_constants"] = fc;
  j["worst_violation"] = num(rep.worst_violation);
  j["pass"] = rep.pass;
  return j;
}

json to_json(const DecayReport& rep) {
  json j;
  j["N_ladder"] = rep.N_ladder;
  json sups = json::array();
  for (double v : rep.sup_estimates) sups.push_back(num(v));
  j["sup_estimates"] = sups;
  j["fitted_exponent"] = num(rep.fitted_exponent);
  j["verdict"] = rep.verdict;
  j["caveats"] = rep.caveats;
  return j;
}

json to_json(const ClassifyResult& res) {
  json j;
  j["verdict"] = res.verdict;
  j["decay"] = to_json(res.decay);
  j["modulation_in"] = res.modulation_in;
  j["direct_in"] = res.direct_in;
  j["field_growth_ratio"] = num(res.field_growth_ratio);
  j["seminorm_growth_ratio"] = num(res.seminorm_growth_ratio);
  j["seminorm_ladder"] = res.seminorm_ladder;
  j["truncation_ladder"] = res.truncation_ladder;
  j["notes"] = res.notes;
  return j;
}

json to_json(const MembershipReport& rep) {
  json j;
  j["norm_kind"] = "modspace_membership";
  j["p"] = std::isinf(rep.p) ? json("inf") : json(rep.p);
  j["value"] = num(rep.value);
  j["sample_count"] = rep.sample_count;
  return j;
}

std::string csv_diag_field(const DiagField& field) {
  std::ostringstream out;
  out << "x,xi,y,eta,mid_x,mid_xi,gdist,modulus\n";
  for (const auto& s : field.samples) {
    out << fmt(s.X.x[0]) << ',' << fmt(s.X.xi[0]) << ',' << fmt(s.Xi.x[0]) << ','
        << fmt(s.Xi.xi[0]) << ',' << fmt(s.mid.x[0]) << ',' << fmt(s.mid.xi[0]) << ','
        << fmt(s.gdist) << ',' << fmt(s.modulus) << '\n';
  }
  return out.str();
}

std::string csv_matrix_elements(const std::vector<MatrixElementSample>& samples) {
  std::ostringstream out;
  out << "x,xi,y,eta,modulus,route\n";
  for (const auto& s : samples) {
    out << fmt(s.X.x[0]) << ',' << fmt(s.X.xi[0]) << ',' << fmt(s.Xi.x[0]) << ','
        << fmt(s.Xi.xi[0]) << ',' << fmt(s.modulus) << ',' << s.route_tag << '\n';
  }
  return out.str();
}

namespace {

template <typename T>
void put(std::string& buf, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  const std::size_t at = buf.size();
  buf.resize(at + sizeof(T));
  std::memcpy(buf.data() + at, &v, sizeof(T));
}

template <typename T>
T take(const std::string& buf, std::size_t& at) {
  if (at + sizeof(T) > buf.size()) throw std::runtime_error("field container truncated");
  T v;
  std::memcpy(&v, buf.data() + at, sizeof(T));
  at += sizeof(T);
  return v;
}

}  // namespace

void write_field_binary(const GstftField& field, const std::string& path) {
  std::string buf;
  buf.append("PFG1", 4);
  put<std::uint64_t>(buf, 1);  // container version
  const std::uint64_t n = field.xi_grid.n();
  put<std::uint64_t>(buf, n);
  put<std::uint64_t>(buf, field.X_samples.size());
  put<std::uint64_t>(buf, field.xi_grid.axes.size());
  for (const auto& ax : field.xi_grid.axes) {
    put<double>(buf, ax.center);
    put<double>(buf, ax.half_width);
    put<std::uint64_t>(buf, static_cast<std::uint64_t>(ax.points));
  }
  put<double>(buf, field.x_cell);
  put<double>(buf, field.lattice.extent);
  put<std::uint64_t>(buf, static_cast<std::uint64_t>(field.lattice.points_per_axis));
  for (const auto& X : field.X_samples) {
    const Vec v = X.flat();
    for (int i = 0; i < v.size(); ++i) put<double>(buf, v[i]);
  }
  for (const auto& v : field.values) {
    put<float>(buf, static_cast<float>(v.real()));
    put<float>(buf, static_cast<float>(v.imag()));
  }
  write_file_atomic(path, buf);
}

GstftField read_field_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string buf = ss.str();
  if (buf.size() < 4 || buf.compare(0, 4, "PFG1") != 0)
    throw std::runtime_error("bad field container magic");
  std::size_t at = 4;
  const auto version = take<std::uint64_t>(buf, at);
  if (version != 1) throw std::runtime_error("unsupported field container version");
  const auto n = take<std::uint64_t>(buf, at);
  const auto num_x = take<std::uint64_t>(buf, at);
  const auto num_axes = take<std::uint64_t>(buf, at);

  GstftField field;
  field.xi_grid.axes.resize(num_axes);
  for (auto& ax : field.xi_grid.axes) {
    ax.center = take<double>(buf, at);
    ax.half_width = take<double>(buf, at);
    ax.points = static_cast<int>(take<std::uint64_t>(buf, at));
  }
  field.x_cell = take<double>(buf, at);
  field.lattice.extent = take<double>(buf, at);
  field.lattice.points_per_axis = static_cast<int>(take<std::uint64_t>(buf, at));
  field.lattice.n = static_cast<int>(n);
  for (std::uint64_t i = 0; i < num_x; ++i) {
    Vec v(2 * n);
    for (std::uint64_t d = 0; d < 2 * n; ++d) v[static_cast<int>(d)] = take<double>(buf, at);
    field.X_samples.push_back(PhasePoint::from_flat(v));
  }
  const std::size_t count = num_x * field.xi_grid.size();
  field.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const float re = take<float>(buf, at);
    const float im = take<float>(buf, at);
    field.values[i] = cplx(re, im);
  }
  return field;
}

std::string csv_field(const GstftField& field) {
  std::ostringstream out;
  out << "x,xi,y,eta,re,im\n";
  const std::size_t ksz = field.xi_grid.size();
  for (std::size_t xi = 0; xi < field.X_samples.size(); ++xi) {
    const PhasePoint& X = field.X_samples[xi];
    for (std::size_t k = 0; k < ksz; ++k) {
      const PhasePoint K = field.xi_grid.point(k);
      const cplx v = field.values[xi * ksz + k];
      out << fmt(X.x[0]) << ',' << fmt(X.xi[0]) << ',' << fmt(K.x[0]) << ','
          << fmt(K.xi[0]) << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << '\n';
    }
  }
  return out.str();
}

std::uint64_t config_hash(const std::string& canonical) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
  }
  fs::rename(tmp, target);
}

}  // namespace pf
