// Copyright 2026 The ttqst Authors
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

namespace ttqst {

/// Selects between the OpenMP kernel and its serial reference. Both produce
/// bitwise-identical results: parallel loops write by index and reductions
/// follow a fixed, thread-count independent order.
enum class Execution { serial, parallel };

/// Threads an OpenMP region would use (1 without OpenMP).
int available_threads();

}  // namespace ttqst
