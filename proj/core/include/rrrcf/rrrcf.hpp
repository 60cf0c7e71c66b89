/*
 * Copyright 2026 The rrrcf Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "rrrcf/archive.hpp"
#include "rrrcf/dataset.hpp"
#include "rrrcf/detector.hpp"
#include "rrrcf/errors.hpp"
#include "rrrcf/forest.hpp"
#include "rrrcf/point.hpp"
#include "rrrcf/random.hpp"
#include "rrrcf/reducer.hpp"
#include "rrrcf/scenario.hpp"
#include "rrrcf/tree.hpp"
