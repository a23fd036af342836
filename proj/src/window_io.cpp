#include <json.hpp>

#include "bfree/error.hpp"
#include "bfree/window.hpp"

namespace bfree {

namespace {

constexpr std::string_view kAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::int64_t coord(const BigInt& v) {
  if (!fits_int64(v)) fail(Errc::TooLarge, "coordinate out of range for export");
  return v.get_si();
}

}  // namespace

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    std::uint32_t chunk = std::uint32_t{bytes[i]} << 16;
    if (i + 1 < bytes.size()) chunk |= std::uint32_t{bytes[i + 1]} << 8;
    if (i + 2 < bytes.size()) chunk |= bytes[i + 2];
    out += kAlphabet[chunk >> 18 & 63];
    out += kAlphabet[chunk >> 12 & 63];
    out += i + 1 < bytes.size() ? kAlphabet[chunk >> 6 & 63] : '=';
    out += i + 2 < bytes.size() ? kAlphabet[chunk & 63] : '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) fail(Errc::ParseError, "base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < text.size(); i += 4) {
    std::uint32_t chunk = 0;
    int pad = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const char c = text[i + k];
      std::uint32_t v = 0;
      if (c == '=') {
        if (i + 4 != text.size() || k < 2) fail(Errc::ParseError, "misplaced base64 padding");
        ++pad;
      } else {
        if (pad) fail(Errc::ParseError, "misplaced base64 padding");
        const std::size_t pos = kAlphabet.find(c);
        if (pos == std::string_view::npos) fail(Errc::ParseError, std::string("invalid base64 character '") + c + "'");
        v = static_cast<std::uint32_t>(pos);
      }
      chunk = chunk << 6 | v;
    }
    out.push_back(static_cast<std::uint8_t>(chunk >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(chunk >> 8 & 0xff));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(chunk & 0xff));
  }
  return out;
}

std::string to_csv(const EtaWindow& w) {
  const Eigen::Index m = w.box.dim();
  const std::uint64_t last = coord(w.box.side(m - 1));
  std::string out;
  out.reserve(w.bits.size() * 2);
  for (std::size_t i = 0; i < w.bits.size(); ++i) {
    out += static_cast<char>('0' + w.bits[i]);
    out += (i + 1) % last == 0 ? '\n' : ',';
  }
  return out;
}

std::string to_pgm(const EtaWindow& w) {
  if (w.box.dim() != 2) fail(Errc::DimensionMismatch, "PGM export needs a 2-dimensional window");
  const std::int64_t x0 = coord(w.box.lo()(0)), x1 = coord(w.box.hi()(0));
  const std::int64_t y0 = coord(w.box.lo()(1)), y1 = coord(w.box.hi()(1));
  std::string out = "P2\n" + std::to_string(x1 - x0 + 1) + " " + std::to_string(y1 - y0 + 1) + "\n1\n";
  const std::int64_t height = y1 - y0 + 1;
  for (std::int64_t y = y1; y >= y0; --y) {
    for (std::int64_t x = x0; x <= x1; ++x) {
      // Row-major with x slowest: cell (x, y) sits at (x - x0) * height + (y - y0).
      out += static_cast<char>('0' + w.bits[static_cast<std::size_t>((x - x0) * height + (y - y0))]);
      out += x == x1 ? '\n' : ' ';
    }
  }
  return out;
}

std::string to_json_text(const EtaWindow& w) {
  std::vector<std::uint8_t> packed((w.bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < w.bits.size(); ++i)
    if (w.bits[i]) packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  nlohmann::ordered_json lo = nlohmann::ordered_json::array(), hi = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < w.box.dim(); ++i) {
    lo.push_back(coord(w.box.lo()(i)));
    hi.push_back(coord(w.box.hi()(i)));
  }
  nlohmann::ordered_json j{{"box", {{"lo", lo}, {"hi", hi}}},
                           {"cells", w.bits.size()},
                           {"ones", w.ones()},
                           {"bits", base64_encode(packed)}};
  return j.dump() + "\n";
}

EtaWindow window_from_json_text(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& lo = j.at("box").at("lo");
    const auto& hi = j.at("box").at("hi");
    if (lo.size() != hi.size() || lo.empty()) fail(Errc::ParseError, "box corners differ in dimension");
    Point plo(static_cast<Eigen::Index>(lo.size())), phi(static_cast<Eigen::Index>(hi.size()));
    for (std::size_t i = 0; i < lo.size(); ++i) {
      plo(static_cast<Eigen::Index>(i)) = BigInt(std::to_string(lo[i].get<std::int64_t>()));
      phi(static_cast<Eigen::Index>(i)) = BigInt(std::to_string(hi[i].get<std::int64_t>()));
    }
    EtaWindow w{Box(plo, phi), {}};
    const std::size_t cells = j.at("cells").get<std::size_t>();
    if (BigInt(std::to_string(cells)) != w.box.volume()) fail(Errc::ParseError, "cell count does not match the box");
    const std::vector<std::uint8_t> packed = base64_decode(j.at("bits").get<std::string>());
    if (packed.size() != (cells + 7) / 8) fail(Errc::ParseError, "bit payload has the wrong length");
    w.bits.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) w.bits[i] = packed[i / 8] >> (i % 8) & 1;
    if (j.contains("ones") && j.at("ones").get<std::uint64_t>() != w.ones())
      fail(Errc::ParseError, "ones count does not match the bits");
    return w;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("window JSON: ") + e.what());
  }
}

std::string density_csv(const DensityProfile& p) {
  std::string out = "side,cells,ratio,ratio_decimal,best_shift,from_seed\n";
  for (const DensityRow& r : p.rows) {
    std::string shift;
    for (Eigen::Index i = 0; i < r.best_shift.size(); ++i) shift += (i ? " " : "") + to_string(r.best_shift(i));
    char dec[32];
    std::snprintf(dec, sizeof dec, "%.6f", r.ratio.get_d());
    out += std::to_string(r.side) + "," + to_string(pow(BigInt(2 * r.side + 1), static_cast<unsigned long>(r.best_shift.size()))) +
           "," + r.ratio.get_str() + "," + dec + "," + shift + "," + (r.from_seed ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace bfree
