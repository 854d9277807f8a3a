// Copyright 2026 The NeuRO Authors
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

#ifndef NEURO_SERVICE_SERVER_HPP_
#define NEURO_SERVICE_SERVER_HPP_

#include "neuro/service/config.hpp"

#include <memory>

namespace neuro::service {

/**
 * REST front end:
 *   POST /api/predict      multipart "audio" file, optional "model_id"
 *   GET  /api/models
 *   GET  /api/predictions?limit=N
 *   GET  /api/health
 * plus static files from config.static_dir when set.
 */
class server {
  public:
    explicit server(service_config config);
    ~server();
    server(const server &) = delete;
    server &operator=(const server &) = delete;

    /// Binds config.host:config.port (port 0 picks a free one) and returns
    /// the bound port. Throws io_error.
    int bind();
    /// Serves until stop(); bind() must have succeeded.
    void run();
    void stop();

    [[nodiscard]] const service_config &config() const noexcept;

  private:
    struct impl;
    std::unique_ptr<impl> impl_;
};

}  // namespace neuro::service

#endif  // NEURO_SERVICE_SERVER_HPP_
