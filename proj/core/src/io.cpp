#include "loopspace/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "loopspace/error.hpp"

namespace loopspace::io {
namespace {

using nlohmann::json;

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    raise(ErrorKind::ParseError, std::string("invalid JSON: ") + e.what());
  }
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    raise(ErrorKind::ParseError, std::string("malformed document: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidArgument) throw;
    raise(ErrorKind::ParseError, std::string("invalid document contents: ") + e.what());
  }
}

json samples_json(const SampledLoop& loop) {
  json rows = json::array();
  for (int j = 0; j < loop.resolution(); ++j) {
    json row = json::array();
    for (int i = 0; i < loop.dim(); ++i) row.push_back(loop.samples()(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

SampledLoop samples_from(const json& rows, int dim, int n) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
    raise(ErrorKind::ParseError, "sample array length does not match n");
  }
  Eigen::MatrixXd m(dim, n);
  for (int j = 0; j < n; ++j) {
    const json& row = rows.at(static_cast<std::size_t>(j));
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      raise(ErrorKind::ParseError, "sample row length does not match dim");
    }
    for (int i = 0; i < dim; ++i) m(i, j) = row.at(static_cast<std::size_t>(i)).get<double>();
  }
  return SampledLoop(std::move(m));
}

json loop_json(const SampledLoop& loop) {
  return {{"dim", loop.dim()}, {"n", loop.resolution()}, {"samples", samples_json(loop)}};
}

SampledLoop loop_from(const json& doc) {
  return samples_from(doc.at("samples"), doc.at("dim").get<int>(), doc.at("n").get<int>());
}

}  // namespace

std::string loop_to_json(const SampledLoop& loop) { return loop_json(loop).dump(); }

SampledLoop loop_from_json(const std::string& text) {
  const json doc = parse(text);
  return guarded([&] { return loop_from(doc); });
}

std::string loop_to_csv(const SampledLoop& loop) {
  std::ostringstream out;
  out << std::setprecision(17) << 't';
  for (int i = 1; i <= loop.dim(); ++i) out << ",x_" << i;
  out << '\n';
  for (int j = 0; j < loop.resolution(); ++j) {
    out << SampledLoop::node_time(j, loop.resolution());
    for (int i = 0; i < loop.dim(); ++i) out << ',' << loop.samples()(i, j);
    out << '\n';
  }
  return out.str();
}

std::string section_to_json(const TangentSection& section) {
  json doc = loop_json(section.base());
  doc["vectors"] = samples_json(section.vectors());
  return doc.dump();
}

TangentSection section_from_json(const EmbeddedManifold& m, const std::string& text) {
  const json doc = parse(text);
  return guarded([&] {
    SampledLoop base = loop_from(doc);
    SampledLoop vectors = samples_from(doc.at("vectors"), base.dim(), base.resolution());
    return TangentSection(m, std::move(base), std::move(vectors));
  });
}

std::string path_to_json(const LoopPath& path) {
  json doc = loop_json(path.front());
  json loops = json::array();
  for (const auto& loop : path.loops()) loops.push_back(samples_json(loop));
  doc["path"] = std::move(loops);
  doc["duration"] = path.duration();
  return doc.dump();
}

LoopPath path_from_json(const EmbeddedManifold& m, const std::string& text) {
  const json doc = parse(text);
  return guarded([&] {
    const int dim = doc.at("dim").get<int>();
    const int n = doc.at("n").get<int>();
    std::vector<SampledLoop> loops;
    for (const json& rows : doc.at("path")) loops.push_back(samples_from(rows, dim, n));
    return LoopPath(m, std::move(loops), doc.value("duration", 1.0));
  });
}

std::string chart_to_json(const Chart& chart) {
  const json doc = {{"center", loop_json(chart.center())},
                    {"manifold", chart.manifold().tag()},
                    {"epsilon", chart.addition().epsilon},
                    {"compression", {{"gain", chart.addition().compression.gain}}}};
  return doc.dump();
}

Chart chart_from_json(const std::string& text) {
  const json doc = parse(text);
  return guarded([&] {
    const EmbeddedManifold m = EmbeddedManifold::from_tag(doc.at("manifold").get<std::string>());
    LocalAdditionSpec spec = LocalAdditionSpec::standard(m);
    if (doc.contains("epsilon")) spec.epsilon = doc.at("epsilon").get<double>();
    if (doc.contains("compression")) spec.compression.gain = doc.at("compression").value("gain", 1.0);
    if (!(spec.epsilon > 0.0) || !(spec.compression.gain > 0.0)) {
      raise(ErrorKind::ParseError, "chart epsilon and gain must be positive");
    }
    return Chart(loop_from(doc.at("center")), spec);
  });
}

std::string matrix_loop_to_json(const MatrixLoop& gamma) {
  json re = json::array(), im = json::array();
  for (const auto& mat : gamma.matrices()) {
    json r = json::array(), i = json::array();
    for (int a = 0; a < gamma.size(); ++a) {
      json rr = json::array(), ii = json::array();
      for (int b = 0; b < gamma.size(); ++b) {
        rr.push_back(mat(a, b).real());
        ii.push_back(mat(a, b).imag());
      }
      r.push_back(std::move(rr));
      i.push_back(std::move(ii));
    }
    re.push_back(std::move(r));
    im.push_back(std::move(i));
  }
  const json doc = {{"size", gamma.size()}, {"n", gamma.resolution()}, {"re", re}, {"im", im}};
  return doc.dump();
}

MatrixLoop matrix_loop_from_json(const std::string& text) {
  const json doc = parse(text);
  return guarded([&] {
    const int size = doc.at("size").get<int>();
    const int n = doc.at("n").get<int>();
    const json& re = doc.at("re");
    const bool has_im = doc.contains("im");
    if (static_cast<int>(re.size()) != n || (has_im && static_cast<int>(doc.at("im").size()) != n)) {
      raise(ErrorKind::ParseError, "matrix loop length does not match n");
    }
    std::vector<Eigen::MatrixXcd> mats;
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXcd m(size, size);
      for (int a = 0; a < size; ++a) {
        for (int b = 0; b < size; ++b) {
          const auto ja = static_cast<std::size_t>(j), aa = static_cast<std::size_t>(a), bb = static_cast<std::size_t>(b);
          const double imag = has_im ? doc["im"].at(ja).at(aa).at(bb).get<double>() : 0.0;
          m(a, b) = {re.at(ja).at(aa).at(bb).get<double>(), imag};
        }
      }
      mats.push_back(std::move(m));
    }
    return MatrixLoop(size, std::move(mats));
  });
}

std::string singular_values_to_csv(const Eigen::VectorXd& values) {
  std::ostringstream out;
  out << std::setprecision(17) << "j,value\n";
  for (int j = 0; j < values.size(); ++j) out << j + 1 << ',' << values(j) << '\n';
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << contents;
}

}  // namespace loopspace::io
