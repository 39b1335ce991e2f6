// Copyright 2026 The clnk Authors.
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

#pragma once

// Umbrella header.

#include "clnk/dense_matrix.hpp"
#include "clnk/error.hpp"
#include "clnk/gcn.hpp"
#include "clnk/graph.hpp"
#include "clnk/heuristics.hpp"
#include "clnk/io.hpp"
#include "clnk/matfact.hpp"
#include "clnk/metrics.hpp"
#include "clnk/models.hpp"
#include "clnk/pipeline.hpp"
#include "clnk/report.hpp"
#include "clnk/rng.hpp"
#include "clnk/splitter.hpp"
#include "clnk/text.hpp"
#include "clnk/trees.hpp"
