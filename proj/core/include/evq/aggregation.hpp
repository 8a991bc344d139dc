// Copyright 2026 The evq Authors
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

#ifndef EVQ_AGGREGATION_HPP_
#define EVQ_AGGREGATION_HPP_

namespace evq {

// Combines a walk travel time and the total recharge price into one cost.
// Both variants are continuous and non-decreasing in each argument.
struct AggregationSpec {
  enum class Variant {
    kLambda,       // weight * travel_time + price
    kLambdaTilde,  // travel_time + weight * price
  };

  Variant variant = Variant::kLambdaTilde;
  double weight = 0.0;

  static AggregationSpec Lambda(double lambda) {
    return {Variant::kLambda, lambda};
  }
  static AggregationSpec LambdaTilde(double lambda_tilde) {
    return {Variant::kLambdaTilde, lambda_tilde};
  }

  double Cost(double travel_time, double price) const {
    return variant == Variant::kLambda ? weight * travel_time + price
                                       : travel_time + weight * price;
  }
};

}  // namespace evq

#endif  // EVQ_AGGREGATION_HPP_
