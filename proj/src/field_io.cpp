#include "qclab/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace qclab {

static_assert(std::endian::native == std::endian::little, "CFLD1 I/O assumes a little-endian host");

void write_cfld1(std::ostream& os, const ComplexField& f) {
  const GridSpec& g = f.spec();
  nlohmann::json header = {{"center_re", g.center.real()},
                           {"center_im", g.center.imag()},
                           {"half_width", g.half_width},
                           {"resolution", g.resolution}};
  os << header.dump() << '\n';
  os.write(reinterpret_cast<const char*>(f.values().data()),
           static_cast<std::streamsize>(f.size() * sizeof(cplx)));
  if (!os) fail(Errc::io, "failed writing CFLD1 payload");
}

ComplexField read_cfld1(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail(Errc::io, "missing CFLD1 header");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::io, std::string("bad CFLD1 header: ") + e.what());
  }
  GridSpec g;
  try {
    g = make_grid(cplx(h.at("center_re").get<double>(), h.at("center_im").get<double>()),
                  h.at("half_width").get<double>(), h.at("resolution").get<int>());
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::io, std::string("bad CFLD1 header: ") + e.what());
  }
  std::vector<cplx> values(g.size());
  is.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(cplx)));
  if (is.gcount() != static_cast<std::streamsize>(values.size() * sizeof(cplx)))
    fail(Errc::io, "truncated CFLD1 payload");
  return ComplexField(g, std::move(values));
}

void write_cfld1(const std::string& path, const ComplexField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::io, "cannot open " + path);
  write_cfld1(os, f);
}

ComplexField read_cfld1(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(Errc::io, "cannot open " + path);
  return read_cfld1(is);
}

void write_field_csv(std::ostream& os, const ComplexField& f) {
  const GridSpec& g = f.spec();
  os << "j,k,x,y,re,im\n" << std::setprecision(17);
  for (int j = 0; j < g.resolution; ++j)
    for (int k = 0; k < g.resolution; ++k) {
      const cplx z = g.point(j, k);
      const cplx v = f(j, k);
      os << j << ',' << k << ',' << z.real() << ',' << z.imag() << ',' << v.real() << ',' << v.imag() << '\n';
    }
}

}  // namespace qclab
