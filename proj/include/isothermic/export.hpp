#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "isothermic/calapso.hpp"
#include "isothermic/grid.hpp"

namespace isothermic {

// Shortest-general form with 17 significant digits, independent of locale.
std::string format_number(double x);

std::string flags_text(const PointFlags& flags);

struct ObjStats {
  size_t vertices = 0;
  size_t faces = 0;
};

// One `v` (and optionally `vn`) record per unmasked vertex in table order and
// one quad per cell whose four corners are unmasked. Throws ValidationError
// when every vertex is masked.
ObjStats write_obj(const SampleTable& table, std::ostream& os, bool normals = false);
ObjStats export_obj(const SampleTable& table, const std::filesystem::path& path,
                    bool normals = false);

void write_csv(const SampleTable& table, std::ostream& os);
void export_csv(const SampleTable& table, const std::filesystem::path& path);

// Columns u1,u2,omega; undefined values are written as empty cells.
void write_field_csv(const CalapsoField& field, const GridSpec& grid, std::ostream& os);
void export_field_csv(const CalapsoField& field, const GridSpec& grid,
                      const std::filesystem::path& path);

// Writes text to path, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace isothermic
