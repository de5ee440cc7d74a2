#include "ctsep/report.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ctsep {

namespace {

void put_u32le(std::string& s, std::uint32_t v) {
  s.push_back(char(v & 0xff));
  s.push_back(char((v >> 8) & 0xff));
  s.push_back(char((v >> 16) & 0xff));
  s.push_back(char((v >> 24) & 0xff));
}

void put_f64le(std::string& s, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  for (int i = 0; i < 8; ++i) s.push_back(char((u >> (8 * i)) & 0xff));
}

double get_f64le(const unsigned char* p) {
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= std::uint64_t(p[i]) << (8 * i);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(text.data(), std::streamsize(text.size()));
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_field(const std::string& path, const Array2c& f) {
  std::string s;
  s.reserve(9 + f.size() * 16);
  s += "MSF1";
  put_u32le(s, std::uint32_t(f.n()));
  s.push_back(char(f.domain() == Domain::Space ? 0 : 1));
  for (std::size_t i = 0; i < f.size(); ++i) {
    put_f64le(s, f[i].real());
    put_f64le(s, f[i].imag());
  }
  write_text_file(path, s);
}

Array2c read_field(const std::string& path) {
  const std::string s = read_text_file(path);
  if (s.size() < 9 || s.compare(0, 4, "MSF1") != 0)
    throw IoError("bad field file (magic): " + path);
  const auto* p = reinterpret_cast<const unsigned char*>(s.data());
  const std::uint32_t n =
      p[4] | (std::uint32_t(p[5]) << 8) | (std::uint32_t(p[6]) << 16) |
      (std::uint32_t(p[7]) << 24);
  const Domain dom = p[8] == 0 ? Domain::Space : Domain::Frequency;
  GridSpec g(int(n));
  if (s.size() != 9 + g.size() * 16)
    throw IoError("bad field file (size): " + path);
  Array2c f(g, dom);
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = cpx(get_f64le(p + 9 + 16 * i), get_f64le(p + 17 + 16 * i));
  return f;
}

double write_png_gray(const std::string& path, const Field& f) {
  const int n = f.n();
  double scale = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    scale = std::max(scale, std::abs(f[i].real()));
  // raw image rows with PNG filter byte 0
  std::vector<unsigned char> raw(std::size_t(n) * (n + 1));
  for (int r = 0; r < n; ++r) {
    raw[std::size_t(r) * (n + 1)] = 0;
    for (int c = 0; c < n; ++c) {
      const double v = f.at(r, c).real();
      const double t = scale > 0 ? (v / scale + 1.0) / 2.0 : 0.5;
      raw[std::size_t(r) * (n + 1) + 1 + c] =
          (unsigned char)std::lround(255.0 * std::min(1.0, std::max(0.0, t)));
    }
  }
  uLongf zcap = compressBound(uLong(raw.size()));
  std::vector<unsigned char> z(zcap);
  if (compress2(z.data(), &zcap, raw.data(), uLong(raw.size()), 6) != Z_OK)
    throw IoError("png deflate failed: " + path);
  z.resize(zcap);

  std::string out;
  out += "\x89PNG\r\n\x1a\n";
  auto chunk = [&out](const char* tag, const std::string& body) {
    std::string len;
    put_u32le(len, std::uint32_t(body.size()));
    std::swap(len[0], len[3]);
    std::swap(len[1], len[2]);
    out += len;
    std::string payload = std::string(tag, 4) + body;
    out += payload;
    const uLong crc =
        crc32(0, reinterpret_cast<const Bytef*>(payload.data()),
              uInt(payload.size()));
    std::string c;
    put_u32le(c, std::uint32_t(crc));
    std::swap(c[0], c[3]);
    std::swap(c[1], c[2]);
    out += c;
  };
  std::string ihdr;
  {
    std::string be;
    put_u32le(be, std::uint32_t(n));
    std::swap(be[0], be[3]);
    std::swap(be[1], be[2]);
    ihdr += be;
    ihdr += be;                 // width == height
    ihdr.push_back(8);          // bit depth
    ihdr.push_back(0);          // grayscale
    ihdr.push_back(0);          // deflate
    ihdr.push_back(0);          // filter
    ihdr.push_back(0);          // no interlace
  }
  chunk("IHDR", ihdr);
  chunk("IDAT", std::string(reinterpret_cast<char*>(z.data()), z.size()));
  chunk("IEND", "");
  write_text_file(path, out);
  return scale;
}

std::string records_to_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream ss;
  ss << "j,s_j,norm_C2,norm_T2,delta1,delta2,muc1,muc2,rel_error,"
        "prop_bound,iters,wall_ms\n";
  for (const auto& r : records) {
    ss << r.j << ',' << r.s << ',' << fmt_double(r.norm_c2) << ','
       << fmt_double(r.norm_t2) << ',' << fmt_double(r.delta1) << ','
       << fmt_double(r.delta2) << ',' << fmt_double(r.muc1) << ','
       << fmt_double(r.muc2) << ',' << fmt_double(r.rel_error) << ','
       << fmt_double(r.prop_bound) << ',' << r.iters << ','
       << fmt_double(r.wall_ms) << '\n';
  }
  return ss.str();
}

std::string records_to_json(const std::vector<SweepRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json o;
    o["j"] = r.j;
    o["s_j"] = r.s;
    o["norm_C2"] = r.norm_c2;
    o["norm_T2"] = r.norm_t2;
    o["delta1"] = r.delta1;
    o["delta2"] = r.delta2;
    o["muc1"] = r.muc1;
    o["muc2"] = r.muc2;
    o["rel_error"] = r.rel_error;
    // JSON has no infinity literal; the diverged flag is carried as null
    if (std::isfinite(r.prop_bound))
      o["prop_bound"] = r.prop_bound;
    else
      o["prop_bound"] = nullptr;
    o["iters"] = r.iters;
    o["wall_ms"] = r.wall_ms;
    o["solver_converged"] = r.solver_converged;
    arr.push_back(o);
  }
  return arr.dump(2) + "\n";
}

std::vector<SweepRecord> records_from_json(const std::string& text) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("bad records json: ") + e.what());
  }
  std::vector<SweepRecord> out;
  for (const auto& o : arr) {
    SweepRecord r;
    r.j = o.at("j").get<int>();
    r.s = o.at("s_j").get<int>();
    r.norm_c2 = o.at("norm_C2").get<double>();
    r.norm_t2 = o.at("norm_T2").get<double>();
    r.delta1 = o.at("delta1").get<double>();
    r.delta2 = o.at("delta2").get<double>();
    r.muc1 = o.at("muc1").get<double>();
    r.muc2 = o.at("muc2").get<double>();
    r.rel_error = o.at("rel_error").get<double>();
    if (o.at("prop_bound").is_null())
      r.prop_bound = std::numeric_limits<double>::infinity();
    else
      r.prop_bound = o.at("prop_bound").get<double>();
    r.iters = o.at("iters").get<int>();
    r.wall_ms = o.at("wall_ms").get<double>();
    r.solver_converged = o.at("solver_converged").get<bool>();
    out.push_back(r);
  }
  return out;
}

}  // namespace ctsep
