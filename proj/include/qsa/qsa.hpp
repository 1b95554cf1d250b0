// Copyright 2026 The QSA Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header for the core library. The CLI layer (qsa/cli.hpp) is kept
// separate because it pulls in the vendored CLI11 and JSON headers.

#pragma once

#include "qsa/anneal.hpp"
#include "qsa/errors.hpp"
#include "qsa/gates.hpp"
#include "qsa/gibbs.hpp"
#include "qsa/instance.hpp"
#include "qsa/resources.hpp"
#include "qsa/rng.hpp"
#include "qsa/statevector.hpp"
#include "qsa/tours.hpp"
