#include "posim/dataset.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace posim {

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

constexpr const char* kFormatVersion = "posim-dataset v1";

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{}) throw std::runtime_error("dataset: bad numeric field '" + s + "'");
  return v;
}

}  // namespace

void write_dataset(std::ostream& out, const LongDataset& data) {
  out << "#" << kFormatVersion << " study=" << (data.study == Study::One ? 1 : 2)
      << " n=" << data.n_subjects << " K=" << data.max_visit
      << " nonpos_hazard=" << data.nonpositive_hazard_count
      << " forced=" << data.forced_count << "\n";
  if (data.study == Study::One) {
    out << "id\tk\tA\tL\tk_star\tY_next\tforced\n";
    for (const auto& r : data.rows) {
      out << r.id << '\t' << r.k << '\t' << r.a << '\t' << format_double(r.l) << '\t' << r.k_star
          << '\t' << r.y_next << '\t' << (r.forced ? 1 : 0) << '\n';
    }
  } else {
    out << "id\tk\tA\tL\tU\tT\tY_next\tforced\n";
    for (const auto& r : data.rows) {
      out << r.id << '\t' << r.k << '\t' << r.a << '\t' << format_double(r.l) << '\t'
          << format_double(r.u) << '\t' << format_double(r.t) << '\t' << r.y_next << '\t'
          << (r.forced ? 1 : 0) << '\n';
    }
  }
}

void write_dataset_file(const std::string& path, const LongDataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_dataset(out, data);
}

LongDataset read_dataset(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("#posim-dataset v1", 0) != 0)
    throw std::runtime_error("dataset: unknown or missing format header");

  LongDataset data;
  {
    std::istringstream hs(header.substr(1));
    std::string tok;
    while (hs >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      std::string key = tok.substr(0, eq);
      std::string val = tok.substr(eq + 1);
      if (key == "study") data.study = (val == "1") ? Study::One : Study::Two;
      else if (key == "n") data.n_subjects = std::stoi(val);
      else if (key == "K") data.max_visit = std::stoi(val);
      else if (key == "nonpos_hazard") data.nonpositive_hazard_count = std::stoll(val);
      else if (key == "forced") data.forced_count = std::stoll(val);
    }
  }

  std::string line;
  std::getline(in, line);  // column header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f;
    std::vector<std::string> fields;
    while (std::getline(ls, f, '\t')) fields.push_back(f);
    VisitRecord r;
    if (data.study == Study::One) {
      if (fields.size() != 7) throw std::runtime_error("dataset: bad study-I row");
      r.id = std::stoi(fields[0]);
      r.k = std::stoi(fields[1]);
      r.a = std::stoi(fields[2]);
      r.l = parse_double(fields[3]);
      r.k_star = std::stoi(fields[4]);
      r.y_next = std::stoi(fields[5]);
      r.forced = fields[6] == "1";
    } else {
      if (fields.size() != 8) throw std::runtime_error("dataset: bad study-II row");
      r.id = std::stoi(fields[0]);
      r.k = std::stoi(fields[1]);
      r.a = std::stoi(fields[2]);
      r.l = parse_double(fields[3]);
      r.u = parse_double(fields[4]);
      r.t = parse_double(fields[5]);
      r.y_next = std::stoi(fields[6]);
      r.forced = fields[7] == "1";
    }
    data.rows.push_back(r);
  }
  return data;
}

LongDataset read_dataset_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_dataset(in);
}

}  // namespace posim
