// Copyright 2026 The soilmap authors.
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

#ifndef SOILMAP_TYPES_HPP
#define SOILMAP_TYPES_HPP

#include <Eigen/Core>

namespace soilmap {

using Scalar = double;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Per-cell field values, shape (ny, nx): row = grid y-index, col = grid
/// x-index. Cells outside the reachable mask hold NaN.
using GridArray = Eigen::ArrayXXd;
using BoolGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace soilmap

#endif  // SOILMAP_TYPES_HPP
