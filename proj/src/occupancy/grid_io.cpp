// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "occu/grid.hpp"
#include "occu/io_util.hpp"

namespace occu {

namespace {

static_assert(std::endian::native == std::endian::little, "binary grid IO assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T v)
{
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* what)
{
    char buf[sizeof(T)];
    if (!in.read(buf, sizeof(T))) throw FormatError(std::string("grid: truncated header at ") + what);
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

void write_header(std::ostream& out, const char* magic, const GridLayout& l)
{
    out.write(magic, 4);
    put<std::uint16_t>(out, kGridFormatVersion);
    for (int d : l.dims) put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
    for (int a = 0; a < 3; ++a) put<double>(out, l.origin[a]);
    put<double>(out, l.unit);
}

GridLayout read_header(std::istream& in, const char* magic)
{
    char m[4];
    if (!in.read(m, 4)) throw FormatError("grid: missing magic");
    if (std::memcmp(m, magic, 4) != 0) throw FormatError(std::string("grid: bad magic, expected ") + magic);
    const auto version = get<std::uint16_t>(in, "version");
    if (version != kGridFormatVersion) throw FormatError("grid: unsupported version " + std::to_string(version));
    GridLayout l;
    for (int& d : l.dims) {
        const auto v = get<std::uint32_t>(in, "dims");
        if (v == 0 || v > (1u << 20)) throw FormatError("grid: dimension out of range");
        d = static_cast<int>(v);
    }
    for (int a = 0; a < 3; ++a) l.origin[a] = get<double>(in, "origin");
    l.unit = get<double>(in, "unit");
    try {
        l.validate();
    } catch (const Error& e) {
        throw FormatError(e.what());
    }
    return l;
}

void append_cube(std::ostringstream& verts, std::ostringstream& faces, const Vec3& lo, double u, std::size_t base,
                 bool ply)
{
    for (int k = 0; k < 8; ++k) {
        const Vec3 p = lo + u * Vec3(k & 1, (k >> 1) & 1, (k >> 2) & 1);
        verts << (ply ? "" : "v ") << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    }
    // Two triangles per face, counterclockwise seen from outside.
    static constexpr int kTris[12][3] = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
                                         {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
    for (const auto& t : kTris) {
        if (ply)
            faces << "3 " << base + t[0] << ' ' << base + t[1] << ' ' << base + t[2] << '\n';
        else
            faces << "f " << base + t[0] + 1 << ' ' << base + t[1] + 1 << ' ' << base + t[2] + 1 << '\n';
    }
}

std::string mesh_text(const OccupancyGrid& grid, bool ply)
{
    std::ostringstream verts, faces;
    verts.precision(17);
    std::size_t cubes = 0;
    for (std::size_t i = 0; i < grid.cell_count(); ++i) {
        if (!grid.get(i)) continue;
        append_cube(verts, faces, grid.layout().corner(grid.layout().unlinear(i)), grid.unit(), cubes * 8, ply);
        ++cubes;
    }
    std::ostringstream out;
    if (ply) {
        out << "ply\nformat ascii 1.0\ncomment occupied voxels\n"
            << "element vertex " << cubes * 8 << "\nproperty double x\nproperty double y\nproperty double z\n"
            << "element face " << cubes * 12 << "\nproperty list uchar int vertex_indices\nend_header\n";
    } else {
        out << "# occupied voxels: " << cubes << '\n';
    }
    out << verts.str() << faces.str();
    return out.str();
}

}  // namespace

void write_grid(std::ostream& out, const OccupancyGrid& grid)
{
    write_header(out, "MOBG", grid.layout());
    out.write(reinterpret_cast<const char*>(grid.bytes().data()), static_cast<std::streamsize>(grid.bytes().size()));
}

OccupancyGrid read_grid(std::istream& in)
{
    const auto layout = read_header(in, "MOBG");
    OccupancyGrid g(layout);
    auto& bytes = g.bytes();
    if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size())))
        throw FormatError("grid: truncated voxel payload");
    const auto n = layout.cell_count();
    if (n % 8 != 0 && (bytes.back() >> (n % 8)) != 0) throw FormatError("grid: non-zero padding bits");
    return g;
}

std::string grid_to_bytes(const OccupancyGrid& grid)
{
    std::ostringstream out(std::ios::binary);
    write_grid(out, grid);
    return out.str();
}

void write_grid(const std::filesystem::path& path, const OccupancyGrid& grid)
{
    write_file_atomic(path, grid_to_bytes(grid));
}

OccupancyGrid read_grid(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return read_grid(in);
}

void write_sdf(std::ostream& out, const ScalarGrid& sdf)
{
    sdf.validate();
    write_header(out, "MSDF", sdf.layout);
    for (float v : sdf.values) put<float>(out, v);
}

ScalarGrid read_sdf(std::istream& in)
{
    ScalarGrid s;
    s.layout = read_header(in, "MSDF");
    s.values.resize(s.layout.cell_count());
    if (!in.read(reinterpret_cast<char*>(s.values.data()), static_cast<std::streamsize>(s.values.size() * 4)))
        throw FormatError("sdf: value count does not match declared dims");
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("sdf: trailing data after declared dims");
    return s;
}

ScalarGrid read_sdf(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return read_sdf(in);
}

std::string grid_to_ply(const OccupancyGrid& grid) { return mesh_text(grid, true); }
std::string grid_to_obj(const OccupancyGrid& grid) { return mesh_text(grid, false); }

}  // namespace occu
