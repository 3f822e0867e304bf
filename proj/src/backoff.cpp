/*
 Copyright 2026 The drmpc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "drmpc/backoff.hpp"

#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

namespace drmpc {

BackoffSchedule compute_backoffs(const LinearStateConstraints& cons,
                                 const TransitionTable& table,
                                 const WassersteinBall& ball,
                                 const SupportPolytope& support, int threads) {
  const int n = table.horizon();
  const int n_f = cons.rows();
  ball.validate();
  for (int l = 0; l < ball.center.count(); ++l)
    require(support.contains(ball.center.samples.row(l).transpose()),
            "compute_backoffs: a training sample violates the support");

  BackoffSchedule out;
  out.beta = Matrix::Zero(n + 1, n_f);

  // Task grid: one (i, row) pair per task; the m-sum inside each task runs
  // in fixed order so the result is independent of thread scheduling.
  struct Task {
    int step;
    int row;
  };
  std::vector<Task> tasks;
  tasks.reserve(static_cast<size_t>(n) * n_f);
  for (int i = 1; i <= n; ++i)
    for (int r = 0; r < n_f; ++r) tasks.push_back({i, r});

  std::atomic<size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      const size_t k = cursor.fetch_add(1);
      if (k >= tasks.size() || failed.load()) return;
      const auto [i, r] = tasks[k];
      double total = 0.0;
      for (int m = 0; m < i; ++m) {
        try {
          const RowVector a = cons.F.row(r) * table.phi(i, m);
          total += worst_case_expectation(a, ball, support);
        } catch (const std::exception& e) {
          std::scoped_lock lock(error_mutex);
          if (!failed.exchange(true)) {
            std::ostringstream msg;
            msg << "back-off LP failed at step " << i << ", row " << r
                << ", disturbance index " << m << ": " << e.what();
            first_error = msg.str();
          }
          return;
        }
      }
      out.beta(i, r) = total;
    }
  };

  const int n_threads = std::max(1, threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw NumericalError(first_error);
  return out;
}

BackoffSchedule compute_backoffs(const LinearStateConstraints& cons,
                                 const LtvSystem& ltv,
                                 const GainSchedule& gains,
                                 const WassersteinBall& ball,
                                 const SupportPolytope& support, int threads) {
  cons.validate(ltv.n_x());
  const TransitionTable table(ltv, gains);
  return compute_backoffs(cons, table, ball, support, threads);
}

}  // namespace drmpc
