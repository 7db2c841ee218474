/*
 * Copyright 2026 The lfmspec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Classify a few maps of the disk and the ball and print their spectra.

#include <iostream>

#include "lfm/lfm.hpp"

namespace {

void report(const char* name, const lfm::Map& map) {
  const auto cls = lfm::classify(map);
  std::cout << name << ": " << lfm::to_string(cls.kind);
  if (cls.alpha) std::cout << ", alpha = " << *cls.alpha;
  std::cout << ", spectral radius = " << lfm::spectral_radius(cls, map.dim()) << '\n';
  try {
    const auto set = lfm::spectrum(map, cls);
    std::cout << "  " << set.provenance << '\n';
    for (const auto& c : set.components) {
      std::cout << "  " << lfm::component_type(c) << " up to modulus " << lfm::max_modulus(c) << '\n';
    }
  } catch (const lfm::Error& e) {
    std::cout << "  " << e.what() << '\n';
  }
}

lfm::Vec vec(std::initializer_list<lfm::cplx> v) {
  lfm::Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto x : v) out(i++) = x;
  return out;
}

}  // namespace

int main() {
  lfm::Mat one = lfm::Mat::Identity(1, 1);
  report("z/(2-z)", lfm::Map(one, vec({0}), vec({-1}), 2.0));
  report("(1+z)/2", lfm::Map(one, vec({1}), vec({0}), 2.0));
  report("(1+z)/(3-z)", lfm::Map(one, vec({1}), vec({-1}), 3.0));

  lfm::Mat diag = lfm::Mat::Zero(2, 2);
  diag(0, 0) = 0.5;
  diag(1, 1) = 1.0 / 3.0;
  report("(z/2, w/3)", lfm::Map::linear(diag));

  report("((1+z)/2, w/2)", lfm::Map(lfm::Mat::Identity(2, 2), vec({1, 0}), vec({0, 0}), 2.0));
  return 0;
}
