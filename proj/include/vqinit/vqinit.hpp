// Copyright 2026 The vqinit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "vqinit/ansatz.hpp"
#include "vqinit/error.hpp"
#include "vqinit/hamiltonian.hpp"
#include "vqinit/harness.hpp"
#include "vqinit/init_schemes.hpp"
#include "vqinit/linalg.hpp"
#include "vqinit/optimize.hpp"
#include "vqinit/oracles.hpp"
#include "vqinit/random.hpp"
#include "vqinit/statevector.hpp"
