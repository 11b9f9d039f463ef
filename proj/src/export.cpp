#include "isothermic/export.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "isothermic/errors.hpp"

namespace isothermic {

namespace {

template <class Writer>
auto with_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  auto result = writer(os);
  os.flush();
  if (!os) throw IoError("write failed for " + path.string());
  return result;
}

void write_vec(std::ostream& os, const char* tag, const Vec3& v) {
  os << tag << ' ' << format_number(v.x()) << ' ' << format_number(v.y()) << ' '
     << format_number(v.z()) << '\n';
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string flags_text(const PointFlags& flags) {
  if (flags.ok()) return "ok";
  if (flags.near_domain_boundary && flags.near_singular) return "domain|singular";
  return flags.near_domain_boundary ? "domain" : "singular";
}

ObjStats write_obj(const SampleTable& table, std::ostream& os, bool normals) {
  const GridSpec& g = table.grid;
  std::vector<size_t> index(g.size(), 0);  // 1-based OBJ index, 0 for masked
  ObjStats stats;
  for (size_t k = 0; k < table.rows.size(); ++k) {
    if (table.rows[k].flags.ok()) index[k] = ++stats.vertices;
  }
  if (stats.vertices == 0) throw ValidationError("mesh is empty: every vertex is masked");

  for (const auto& p : table.rows) {
    if (p.flags.ok()) write_vec(os, "v", p.position);
  }
  if (normals) {
    for (const auto& p : table.rows) {
      if (p.flags.ok()) write_vec(os, "vn", p.normal);
    }
  }
  for (int i = 0; i + 1 < g.n1(); ++i) {
    for (int j = 0; j + 1 < g.n2(); ++j) {
      const size_t a = index[g.index(i, j)], b = index[g.index(i + 1, j)];
      const size_t c = index[g.index(i + 1, j + 1)], d = index[g.index(i, j + 1)];
      if (!a || !b || !c || !d) continue;
      ++stats.faces;
      if (normals) {
        os << "f " << a << "//" << a << ' ' << b << "//" << b << ' ' << c << "//" << c << ' '
           << d << "//" << d << '\n';
      } else {
        os << "f " << a << ' ' << b << ' ' << c << ' ' << d << '\n';
      }
    }
  }
  return stats;
}

ObjStats export_obj(const SampleTable& table, const std::filesystem::path& path, bool normals) {
  // Render first so an empty mesh never leaves a file behind.
  std::ostringstream buffer;
  const ObjStats stats = write_obj(table, buffer, normals);
  write_text_file(path, buffer.str());
  return stats;
}

void write_csv(const SampleTable& table, std::ostream& os) {
  os << "u1,u2,x,y,z,psi,lambda1,lambda2,H,Hskew,K,M,fg_sum,flags\n";
  for (const auto& p : table.rows) {
    os << format_number(p.u1) << ',' << format_number(p.u2);
    if (p.flags.ok()) {
      for (double v : {p.position.x(), p.position.y(), p.position.z(), p.psi, p.lambda1,
                       p.lambda2, p.H, p.Hskew, p.K, p.M, p.fg_sum}) {
        os << ',' << format_number(v);
      }
    } else {
      os << ",,,,,,,,,,,";
    }
    os << ',' << flags_text(p.flags) << '\n';
  }
}

void export_csv(const SampleTable& table, const std::filesystem::path& path) {
  with_file(path, [&](std::ostream& os) {
    write_csv(table, os);
    return 0;
  });
}

void write_field_csv(const CalapsoField& field, const GridSpec& grid, std::ostream& os) {
  os << "u1,u2,omega\n";
  for (int i = 0; i < grid.n1(); ++i) {
    for (int j = 0; j < grid.n2(); ++j) {
      const double u1 = grid.u1(i), u2 = grid.u2(j);
      const double w = field(u1, u2);
      os << format_number(u1) << ',' << format_number(u2) << ',';
      if (std::isfinite(w)) os << format_number(w);
      os << '\n';
    }
  }
}

void export_field_csv(const CalapsoField& field, const GridSpec& grid,
                      const std::filesystem::path& path) {
  with_file(path, [&](std::ostream& os) {
    write_field_csv(field, grid, os);
    return 0;
  });
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  with_file(path, [&](std::ostream& os) {
    os << text;
    return 0;
  });
}

}  // namespace isothermic
