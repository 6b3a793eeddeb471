// Copyright 2026 The hops Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "hops/document.hpp"

#include <fstream>
#include <map>

#include "hops/errors.hpp"

namespace hops {

using nlohmann::json;

namespace {

json matrix_json(const Operator& A) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < A.rows(); ++r)
    for (Eigen::Index c = 0; c < A.cols(); ++c) {
      re.push_back(A(r, c).real());
      im.push_back(A(r, c).imag());
    }
  return {{"dim", A.rows()}, {"re", re}, {"im", im}};
}

Operator matrix_from(const json& j) {
  const auto d = j.at("dim").get<Eigen::Index>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (d < 1 || re.size() != static_cast<std::size_t>(d * d) || im.size() != re.size())
    throw ConfigError("malformed matrix in schedule document");
  Operator A(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) {
      const auto i = static_cast<std::size_t>(r * d + c);
      A(r, c) = Complex(re[i].get<double>(), im[i].get<double>());
    }
  return A;
}

class Writer {
 public:
  json generators = json::array();
  json blocks = json::array();

  json segments(const PulseSchedule& s) {
    json out = json::array();
    for (const auto& seg : s.segments) {
      json j;
      if (seg.is_free()) {
        j["free"] = std::get<FreeSegment>(seg.body).duration;
      } else if (seg.is_pulse()) {
        j["pulse"] = pulse(std::get<PulseSegment>(seg.body).pulse);
      } else {
        j["block"] = block(std::get<BlockSegment>(seg.body).body);
      }
      if (!seg.label.empty()) j["label"] = seg.label;
      out.push_back(std::move(j));
    }
    return out;
  }

 private:
  std::map<const Operator*, std::size_t> gen_ids_;
  std::map<const PulseSchedule*, std::size_t> block_ids_;

  std::size_t block(const SchedulePtr& b) {
    auto it = block_ids_.find(b.get());
    if (it != block_ids_.end()) return it->second;
    json body = segments(*b);  // children first
    const std::size_t id = blocks.size();
    json entry{{"segments", std::move(body)}};
    if (b->instantaneous) entry["instantaneous"] = true;
    if (b->oracle_negative_time) entry["oracle_negative_time"] = true;
    blocks.push_back(std::move(entry));
    block_ids_.emplace(b.get(), id);
    return id;
  }

  json pulse(const PulseSpec& p) {
    if (!p.generator) throw PreconditionError("pulse without a generator");
    auto it = gen_ids_.find(p.generator.get());
    if (it == gen_ids_.end()) {
      it = gen_ids_.emplace(p.generator.get(), generators.size()).first;
      generators.push_back(matrix_json(*p.generator));
    }
    json j{{"generator", it->second}, {"area", p.area},         {"width", p.width},
           {"stretch", p.stretch},    {"reversed", p.reversed}};
    if (!p.name.empty()) j["name"] = p.name;
    if (p.samples) {
      json samples = json::array();
      for (const auto& s : *p.samples) samples.push_back({s.time, s.amplitude});
      j["samples"] = samples;
    }
    return j;
  }
};

class Reader {
 public:
  explicit Reader(const json& doc) {
    for (const auto& g : doc.at("generators")) generators_.push_back(std::make_shared<const Operator>(matrix_from(g)));
    for (const auto& b : doc.at("blocks")) {
      PulseSchedule s;
      s.segments = segments(b.at("segments"));
      s.instantaneous = b.value("instantaneous", false);
      s.oracle_negative_time = b.value("oracle_negative_time", false);
      blocks_.push_back(share(std::move(s)));
    }
  }

  std::vector<Segment> segments(const json& arr) const {
    std::vector<Segment> out;
    for (const auto& j : arr) {
      Segment seg;
      seg.label = j.value("label", std::string{});
      if (j.contains("free")) {
        seg.body = FreeSegment{j.at("free").get<double>()};
      } else if (j.contains("pulse")) {
        seg.body = PulseSegment{pulse(j.at("pulse"))};
      } else if (j.contains("block")) {
        const auto id = j.at("block").get<std::size_t>();
        if (id >= blocks_.size()) throw ConfigError("schedule document refers to unknown block " + std::to_string(id));
        seg.body = BlockSegment{blocks_[id]};
      } else {
        throw ConfigError("schedule document segment has no free/pulse/block entry");
      }
      out.push_back(std::move(seg));
    }
    return out;
  }

 private:
  std::vector<std::shared_ptr<const Operator>> generators_;
  std::vector<SchedulePtr> blocks_;

  PulseSpec pulse(const json& j) const {
    const auto id = j.at("generator").get<std::size_t>();
    if (id >= generators_.size()) throw ConfigError("schedule document refers to unknown generator");
    PulseSpec p;
    p.generator = generators_[id];
    p.name = j.value("name", std::string{});
    p.area = j.at("area").get<double>();
    p.width = j.at("width").get<double>();
    p.stretch = j.at("stretch").get<double>();
    p.reversed = j.at("reversed").get<bool>();
    if (j.contains("samples")) {
      std::vector<Sample> samples;
      for (const auto& s : j.at("samples")) samples.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
      p.samples = std::make_shared<const std::vector<Sample>>(std::move(samples));
    }
    return p;
  }
};

}  // namespace

json to_json(const ScheduleDocument& doc) {
  Writer w;
  json root = w.segments(doc.schedule);
  const auto stats = schedule_stats(doc.schedule);
  return {{"format", kDocumentFormat},
          {"H0", matrix_json(doc.H0)},
          {"target", matrix_json(doc.target)},
          {"horizon", doc.horizon},
          {"instantaneous", doc.schedule.instantaneous},
          {"oracle_negative_time", doc.schedule.oracle_negative_time},
          {"stats",
           {{"pulses", stats.pulses},
            {"free_segments", stats.free_segments},
            {"negative_free", stats.negative_free},
            {"duration", stats.duration},
            {"max_stretch", stats.max_stretch}}},
          {"provenance", doc.provenance},
          {"generators", w.generators},
          {"blocks", w.blocks},
          {"segments", root}};
}

ScheduleDocument document_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != kDocumentFormat)
      throw ConfigError("unsupported schedule document format " + j.at("format").get<std::string>());
    Reader r(j);
    ScheduleDocument doc;
    doc.schedule.segments = r.segments(j.at("segments"));
    doc.schedule.instantaneous = j.at("instantaneous").get<bool>();
    doc.schedule.oracle_negative_time = j.at("oracle_negative_time").get<bool>();
    doc.H0 = matrix_from(j.at("H0"));
    doc.target = matrix_from(j.at("target"));
    doc.horizon = j.at("horizon").get<double>();
    doc.provenance = j.value("provenance", json::object());
    return doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed schedule document: ") + e.what());
  }
}

void write_document(const ScheduleDocument& doc, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << to_json(doc).dump();
  if (!f) throw ConfigError("failed writing " + path);
}

ScheduleDocument read_document(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
  return document_from_json(j);
}

}  // namespace hops
