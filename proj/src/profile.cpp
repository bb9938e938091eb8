#include "mcurv/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "mcurv/errors.hpp"
#include "mcurv/rng.hpp"

namespace mcurv {
namespace {

bool record_less(const ProfileRecord& a, const ProfileRecord& b) {
  if (a.r_half_perimeter != b.r_half_perimeter)
    return a.r_half_perimeter < b.r_half_perimeter;
  return a.indices < b.indices;
}

long long combinations3(long long n) { return n * (n - 1) * (n - 2) / 6; }

bool skippable(const std::string& code) {
  return code == "DegenerateTriple" || code == "TriangleInequalityViolated" ||
         code == "DegenerateAllZero" || code == "NonFiniteInput";
}

}  // namespace

std::vector<LambdaBin> default_lambda_bins() {
  return {{1.25, 0.02}, {1.5, 0.02}, {1.75, 0.02}, {2.0, 0.02}};
}

ProfileResult curvature_profile(const Space& s, std::span<const int> sample,
                                std::span<const LambdaBin> bins, int n_triples,
                                WitnessMode mode, std::uint64_t seed) {
  if (sample.size() < 3) fail("SampleTooSmall", "profile needs at least 3 sample points");
  for (int p : sample)
    if (p < 0 || p >= s.point_count())
      fail("IndexOutOfRange", "sample point outside the space");
  const int n = static_cast<int>(sample.size());

  // Positions into the sample; exhaustive when the budget covers C(n,3),
  // otherwise uniform combinations without replacement.
  std::vector<std::array<int, 3>> picks;
  const long long total = combinations3(n);
  if (n_triples <= 0 || total <= n_triples) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) picks.push_back({i, j, k});
  } else {
    Rng rng(seed);
    std::set<std::array<int, 3>> seen;
    const long long cap = 50ll * n_triples + 1000;
    for (long long attempts = 0;
         static_cast<int>(seen.size()) < n_triples && attempts < cap; ++attempts) {
      std::vector<int> draw = rng.sample_distinct(n, 3);
      std::sort(draw.begin(), draw.end());
      seen.insert({draw[0], draw[1], draw[2]});
    }
    picks.assign(seen.begin(), seen.end());
  }

  ProfileResult out;
  out.bins.assign(bins.begin(), bins.end());
  for (const auto& pk : picks) {
    std::array<int, 3> idx = {sample[static_cast<std::size_t>(pk[0])],
                              sample[static_cast<std::size_t>(pk[1])],
                              sample[static_cast<std::size_t>(pk[2])]};
    std::sort(idx.begin(), idx.end());
    ProfileRecord rec;
    rec.indices = idx;
    try {
      rec.sides = triple_sides(s, idx[0], idx[1], idx[2]);
      const GromovRadii g = gromov_products(rec.sides);
      rec.r_half_perimeter = g.r1 + g.r2 + g.r3;
      if (is_degenerate(g)) {
        rec.lambda = lambda_measure(rec.sides).lambda;
        rec.rho = std::numeric_limits<double>::quiet_NaN();
        rec.bin = classify_triple(rec.sides, bins);
        out.flat.push_back(std::move(rec));
        continue;
      }
      rec.lambda = lambda_measure(rec.sides).lambda;
      const RhoResult rr = rho_triple(s, idx[0], idx[1], idx[2], mode);
      rec.rho = rr.rho;
      rec.witness = rr.witness;
      rec.attained = rr.attained;
    } catch (const DomainError& e) {
      if (skippable(e.code())) {
        ++out.degenerate_skipped;
        continue;
      }
      throw;
    }
    rec.bin = classify_triple(rec.sides, bins);
    out.records.push_back(std::move(rec));
  }
  std::sort(out.records.begin(), out.records.end(), record_less);
  std::sort(out.flat.begin(), out.flat.end(), record_less);
  out.degenerate_skipped += static_cast<int>(out.flat.size());
  return out;
}

namespace {

void check_finite_fields(const ProfileRecord& r) {
  const double vals[] = {r.sides.d12, r.sides.d13, r.sides.d23,
                         r.r_half_perimeter, r.lambda, r.rho};
  for (double v : vals)
    if (std::isnan(v)) fail("DegenerateLeak", "NaN field in a profile record");
}

}  // namespace

void emit_profile_csv(std::span<const ProfileRecord> records, const std::string& path) {
  if (records.empty()) fail("EmptyFamily", "no profile records to write");
  std::vector<ProfileRecord> rows(records.begin(), records.end());
  for (const auto& r : rows) check_finite_fields(r);
  std::sort(rows.begin(), rows.end(), record_less);
  std::ofstream out(path);
  if (!out) fail("IoError", "cannot open " + path + " for writing");
  out << "i,j,k,d12,d13,d23,r,lambda,rho,attained\n";
  char buf[400];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d",
                  r.indices[0], r.indices[1], r.indices[2], r.sides.d12, r.sides.d13,
                  r.sides.d23, r.r_half_perimeter, r.lambda, r.rho, r.attained ? 1 : 0);
    out << buf << '\n';
  }
  if (!out) fail("IoError", "failed writing " + path);
}

static int parse_int_field(const std::string& field, int line_no) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(field, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != field.size())
    fail("ParseError", "bad integer \"" + field + "\" on line " + std::to_string(line_no));
  return v;
}

static double parse_double_field(const std::string& field, int line_no) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size())
    fail("ParseError", "bad number \"" + field + "\" on line " + std::to_string(line_no));
  return v;
}

std::vector<ProfileRecord> read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IoError", "cannot open " + path + " for reading");
  std::string line;
  if (!std::getline(in, line) || line != "i,j,k,d12,d13,d23,r,lambda,rho,attained")
    fail("ParseError", "unexpected profile CSV header");
  std::vector<ProfileRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 10)
      fail("ParseError", "expected 10 fields on line " + std::to_string(line_no));
    ProfileRecord r;
    r.indices = {parse_int_field(fields[0], line_no), parse_int_field(fields[1], line_no),
                 parse_int_field(fields[2], line_no)};
    r.sides.d12 = parse_double_field(fields[3], line_no);
    r.sides.d13 = parse_double_field(fields[4], line_no);
    r.sides.d23 = parse_double_field(fields[5], line_no);
    r.r_half_perimeter = parse_double_field(fields[6], line_no);
    r.lambda = parse_double_field(fields[7], line_no);
    r.rho = parse_double_field(fields[8], line_no);
    r.attained = fields[9] == "1";
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a"};
constexpr const char* kGray = "#999999";

}  // namespace

void emit_profile_svg(std::span<const ProfileRecord> records, const std::string& path,
                      const ProfileSvgOptions& options) {
  if (records.empty()) fail("EmptyFamily", "no profile records to plot");
  for (const auto& r : records) check_finite_fields(r);
  const std::vector<LambdaBin> bins =
      options.bins.empty() ? default_lambda_bins() : options.bins;

  const double root3 = std::sqrt(3.0);
  double xmax = 0.0, ymin = 1.0, ymax = 2.0;
  for (const auto& r : records) {
    xmax = std::max(xmax, r.r_half_perimeter);
    ymin = std::min(ymin, r.rho);
    ymax = std::max(ymax, r.rho);
  }
  if (xmax <= 0.0) xmax = 1.0;
  const double xlo = 0.0;
  const double xhi = xmax * 1.05;
  double pad = 0.05 * (ymax - ymin);
  if (pad <= 0.0) pad = 0.1;
  const double ylo = ymin - pad;
  const double yhi = ymax + pad;

  const double w = options.width > 0 ? options.width : 800;
  const double h = options.height > 0 ? options.height : 500;
  const double ml = 70, mr = 20, mt = 20, mb = 50;
  auto px = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - ylo) / (yhi - ylo) * (h - mt - mb); };

  std::ofstream out(path);
  if (!out) fail("IoError", "cannot open " + path + " for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
      << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << options.width << ' '
      << options.height << "\">\n";
  out << "<rect width=\"" << options.width << "\" height=\"" << options.height
      << "\" fill=\"white\"/>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";

  // axes and ticks
  out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(h - mb) << "\" x2=\"" << num(w - mr)
      << "\" y2=\"" << num(h - mb) << "\" stroke=\"#333\"/>\n";
  out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(mt) << "\" x2=\"" << num(ml)
      << "\" y2=\"" << num(h - mb) << "\" stroke=\"#333\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = xlo + (xhi - xlo) * i / 4.0;
    out << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(h - mb) << "\" x2=\""
        << num(px(x)) << "\" y2=\"" << num(h - mb + 5) << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << num(px(x)) << "\" y=\"" << num(h - mb + 18)
        << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
    const double y = ylo + (yhi - ylo) * i / 4.0;
    out << "<line x1=\"" << num(ml - 5) << "\" y1=\"" << num(py(y)) << "\" x2=\"" << num(ml)
        << "\" y2=\"" << num(py(y)) << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << num(ml - 8) << "\" y=\"" << num(py(y) + 4)
        << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
  }
  out << "<text x=\"" << num((ml + w - mr) / 2) << "\" y=\"" << num(h - 12)
      << "\" text-anchor=\"middle\">r</text>\n";
  out << "<text x=\"" << num(14.0) << "\" y=\"" << num((mt + h - mb) / 2)
      << "\" text-anchor=\"middle\">rho</text>\n";

  // reference lines
  struct Ref {
    double y;
    const char* label;
  };
  const Ref refs[] = {{1.0, "rho = 1"}, {2.0 / root3, "rho = 2/sqrt(3)"}, {2.0, "rho = 2"}};
  for (const auto& ref : refs) {
    if (ref.y < ylo || ref.y > yhi) continue;
    out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(py(ref.y)) << "\" x2=\""
        << num(w - mr) << "\" y2=\"" << num(py(ref.y))
        << "\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n";
    out << "<text x=\"" << num(w - mr - 4) << "\" y=\"" << num(py(ref.y) - 4)
        << "\" text-anchor=\"end\" fill=\"#888\">" << ref.label << "</text>\n";
  }

  // points
  std::vector<int> bin_counts(bins.size(), 0);
  int unbinned = 0;
  for (const auto& r : records) {
    const char* color = kGray;
    if (r.bin && *r.bin < bins.size()) {
      color = kPalette[*r.bin % 4];
      ++bin_counts[*r.bin];
    } else {
      ++unbinned;
    }
    out << "<circle cx=\"" << num(px(r.r_half_perimeter)) << "\" cy=\"" << num(py(r.rho))
        << "\" r=\"3\" fill=\"" << color << "\" fill-opacity=\"0.8\"/>\n";
  }

  // legend: only bins that actually hold points
  double ly = mt + 10;
  char label[96];
  for (std::size_t b = 0; b < bins.size(); ++b) {
    if (bin_counts[b] == 0) continue;
    out << "<rect x=\"" << num(ml + 10) << "\" y=\"" << num(ly) << "\" width=\"10\" "
        << "height=\"10\" fill=\"" << kPalette[b % 4] << "\"/>\n";
    std::snprintf(label, sizeof label, "lambda %.6g +/- %.6g", bins[b].center,
                  bins[b].half_width);
    out << "<text x=\"" << num(ml + 26) << "\" y=\"" << num(ly + 9) << "\">" << label
        << "</text>\n";
    ly += 16;
  }
  if (unbinned > 0) {
    out << "<rect x=\"" << num(ml + 10) << "\" y=\"" << num(ly) << "\" width=\"10\" "
        << "height=\"10\" fill=\"" << kGray << "\"/>\n";
    out << "<text x=\"" << num(ml + 26) << "\" y=\"" << num(ly + 9) << "\">other</text>\n";
  }

  out << "</g>\n</svg>\n";
  if (!out) fail("IoError", "failed writing " + path);
}

}  // namespace mcurv
