/*
 * Copyright 2026 The ldseg authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "ldseg/remote.hpp"

#include <chrono>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ldseg/errors.hpp"
#include "ldseg/png_io.hpp"

using json = nlohmann::json;

namespace ldseg {
namespace {

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  static const char table[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += table[(v >> 18) & 63];
    out += table[(v >> 12) & 63];
    out += table[(v >> 6) & 63];
    out += table[v & 63];
  }
  if (i + 1 == bytes.size()) {
    const std::uint32_t v = bytes[i] << 16;
    out += table[(v >> 18) & 63];
    out += table[(v >> 12) & 63];
    out += "==";
  } else if (i + 2 == bytes.size()) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out += table[(v >> 18) & 63];
    out += table[(v >> 12) & 63];
    out += table[(v >> 6) & 63];
    out += "=";
  }
  return out;
}

struct ParsedEndpoint {
  std::string base; // scheme://host:port
  std::string path; // leading slash
};

ParsedEndpoint parse_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ValueError("endpoint must include a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
    s.replace(pos, from.size(), to);
  return s;
}

} // namespace

void RemoteDescriberConfig::validate() const {
  if (endpoint.empty()) throw ValueError("remote describer endpoint must be set");
  if (timeout_seconds <= 0.0) throw ValueError("remote describer timeout must be positive");
  if (retries < 0) throw ValueError("remote describer retries must be >= 0");
  parse_endpoint(endpoint);
}

RemoteOutcome remote_describe(const RgbImage& colored, const RemoteDescriberConfig& config,
                              const std::string& fallback_text, const std::string& categories) {
  config.validate();
  const ParsedEndpoint ep = parse_endpoint(config.endpoint);

  json body{{"image_b64", base64_encode(encode_rgb_png(colored))},
            {"prompt", replace_all(config.prompt_template, "{categories}", categories)}};
  const std::string payload = body.dump();

  const auto timeout = std::chrono::milliseconds(static_cast<long>(config.timeout_seconds * 1000.0));
  for (int attempt = 0; attempt <= config.retries; ++attempt) {
    httplib::Client client(ep.base);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    auto res = client.Post(ep.path, payload, "application/json");
    if (!res || res->status < 200 || res->status >= 300) continue;
    try {
      json reply = json::parse(res->body);
      std::string text = reply.at("text").get<std::string>();
      if (text.empty()) continue; // malformed: an empty description is useless
      return {std::move(text), "remote"};
    } catch (const json::exception&) {
      continue;
    }
  }
  return {fallback_text, "fallback"};
}

} // namespace ldseg
