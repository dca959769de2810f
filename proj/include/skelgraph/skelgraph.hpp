/*
 * Copyright 2026 The skelgraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SKELGRAPH_SKELGRAPH_HPP
#define SKELGRAPH_SKELGRAPH_HPP

#include "skelgraph/checkpoint.hpp"
#include "skelgraph/collaborative_relation.hpp"
#include "skelgraph/config.hpp"
#include "skelgraph/evaluation.hpp"
#include "skelgraph/gradcheck.hpp"
#include "skelgraph/graph.hpp"
#include "skelgraph/layout.hpp"
#include "skelgraph/model.hpp"
#include "skelgraph/optimizer.hpp"
#include "skelgraph/recognition.hpp"
#include "skelgraph/skeleton.hpp"
#include "skelgraph/ssp.hpp"
#include "skelgraph/trainer.hpp"

#endif  // SKELGRAPH_SKELGRAPH_HPP
