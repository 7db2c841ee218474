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

#ifndef LFM_LFM_HPP_
#define LFM_LFM_HPP_

#include "lfm/common.hpp"
#include "lfm/map.hpp"
#include "lfm/classify.hpp"
#include "lfm/spectral_set.hpp"
#include "lfm/spectra.hpp"
#include "lfm/series.hpp"
#include "lfm/oracle.hpp"

#endif  // LFM_LFM_HPP_
