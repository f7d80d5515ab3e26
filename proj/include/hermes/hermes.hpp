/*
 * Copyright 2026 The Hermes Authors
 *
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

#include "hermes/bench.hpp"
#include "hermes/bfv.hpp"
#include "hermes/catalog.hpp"
#include "hermes/csv.hpp"
#include "hermes/errors.hpp"
#include "hermes/numeric.hpp"
#include "hermes/pack.hpp"
#include "hermes/ring.hpp"
#include "hermes/rng.hpp"
#include "hermes/serial.hpp"
#include "hermes/sha256.hpp"
#include "hermes/trace.hpp"
