#include "mfglab/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "mfglab/error.hpp"

namespace mfglab {

namespace {

std::filesystem::path with_ext(std::filesystem::path stem, const char* ext) {
  stem += ext;
  return stem;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

}  // namespace

void write_field(const std::filesystem::path& stem, const ScalarField& f, const std::string& quantity) {
  const GridSpec& g = f.grid();
  {
    std::ofstream hdr(with_ext(stem, ".hdr"));
    if (!hdr) throw Error("cannot write " + with_ext(stem, ".hdr").string());
    hdr << "dim=" << g.dim() << "\n";
    hdr << "n=" << g.points() << "\n";
    hdr << "half_width=" << fmt17(g.half_width(0));
    if (g.dim() == 2) hdr << "," << fmt17(g.half_width(1));
    hdr << "\nquantity=" << quantity << "\n";
  }
  std::ofstream bin(with_ext(stem, ".f64"), std::ios::binary);
  if (!bin) throw Error("cannot write " + with_ext(stem, ".f64").string());
  for (std::size_t j = 0; j < f.size(); ++j) {
    std::uint64_t bits;
    double v = f[j];
    std::memcpy(&bits, &v, sizeof bits);
    bits = to_le(bits);
    bin.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
}

StoredField read_field(const std::filesystem::path& stem) {
  std::ifstream hdr(with_ext(stem, ".hdr"));
  if (!hdr) throw Error("cannot read " + with_ext(stem, ".hdr").string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(hdr, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  for (const char* key : {"dim", "n", "half_width"})
    if (!kv.count(key)) throw Error("field header missing key " + std::string(key));
  const int dim = std::stoi(kv["dim"]);
  const int n = std::stoi(kv["n"]);
  Point hw{0.0, 0.0};
  {
    std::stringstream ss(kv["half_width"]);
    std::string tok;
    int a = 0;
    while (std::getline(ss, tok, ',') && a < 2) hw[a++] = std::stod(tok);
    if (a == 1) hw[1] = hw[0];
  }
  GridSpec g(dim, hw, n);
  std::ifstream bin(with_ext(stem, ".f64"), std::ios::binary);
  if (!bin) throw Error("cannot read " + with_ext(stem, ".f64").string());
  std::vector<double> vals(g.size());
  for (auto& v : vals) {
    std::uint64_t bits;
    if (!bin.read(reinterpret_cast<char*>(&bits), sizeof bits)) throw Error("field file truncated");
    bits = to_le(bits);
    std::memcpy(&v, &bits, sizeof v);
  }
  return {ScalarField(g, std::move(vals)), kv.count("quantity") ? kv["quantity"] : std::string()};
}

}  // namespace mfglab
