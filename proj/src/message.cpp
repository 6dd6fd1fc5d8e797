// Copyright 2026 The PBN Authors
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

#include "pbn/message.hpp"

#include <json.hpp>

#include "pbn/error.hpp"

namespace pbn {

using nlohmann::json;

namespace {

json id_to_json(const DeviceId& id) {
  return json{{"name", id.social_name()}, {"sim", id.sim_number()}};
}

DeviceId id_from_json(const json& j) {
  return make_device_id(j.at("name").get<std::string>(),
                        j.at("sim").get<std::string>());
}

}  // namespace

const char* app_message_kind(const AppMessage& message) {
  struct Visitor {
    const char* operator()(const JoinRequest&) const { return "join"; }
    const char* operator()(const PadSnapshot&) const { return "pad"; }
    const char* operator()(const RealTimeUpdate&) const { return "rtupdate"; }
    const char* operator()(const FileOffer&) const { return "offer"; }
    const char* operator()(const OfferResponse&) const { return "response"; }
    const char* operator()(const RawData&) const { return "data"; }
  };
  return std::visit(Visitor{}, message);
}

std::string encode_message(const AppMessage& message) {
  json j;
  j["kind"] = app_message_kind(message);
  if (const auto* pad = std::get_if<PadSnapshot>(&message)) {
    j["doc_id"] = pad->doc_id;
    j["title"] = pad->title;
    j["revision"] = pad->revision;
    j["content"] = pad->content;
    j["owner"] = id_to_json(pad->owner);
  } else if (const auto* update = std::get_if<RealTimeUpdate>(&message)) {
    j["doc_id"] = update->doc_id;
    j["revision"] = update->base_revision;
    j["content"] = update->content;
    j["origin"] = id_to_json(update->origin);
  } else if (const auto* offer = std::get_if<FileOffer>(&message)) {
    j["offer_id"] = offer->offer_id;
    j["doc_id"] = offer->doc_id;
    j["title"] = offer->title;
    j["revision"] = offer->revision;
    j["content"] = offer->content;
    j["owner"] = id_to_json(offer->owner);
    j["recipient"] = id_to_json(offer->recipient);
  } else if (const auto* response = std::get_if<OfferResponse>(&message)) {
    j["offer_id"] = response->offer_id;
    j["doc_id"] = response->doc_id;
    j["recipient"] = id_to_json(response->recipient);
    j["accepted"] = response->accepted;
  } else if (const auto* data = std::get_if<RawData>(&message)) {
    j["bytes"] = data->bytes;
  }
  return j.dump();
}

AppMessage decode_message(const std::string& bytes) {
  json j;
  try {
    j = json::parse(bytes);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "join") {
      return JoinRequest{};
    }
    if (kind == "pad") {
      PadSnapshot pad;
      pad.doc_id = j.at("doc_id").get<std::string>();
      pad.title = j.at("title").get<std::string>();
      pad.revision = j.at("revision").get<std::uint64_t>();
      pad.content = j.at("content").get<std::string>();
      pad.owner = id_from_json(j.at("owner"));
      return pad;
    }
    if (kind == "rtupdate") {
      RealTimeUpdate update;
      update.doc_id = j.at("doc_id").get<std::string>();
      update.base_revision = j.at("revision").get<std::uint64_t>();
      update.content = j.at("content").get<std::string>();
      update.origin = id_from_json(j.at("origin"));
      return update;
    }
    if (kind == "offer") {
      FileOffer offer;
      offer.offer_id = j.at("offer_id").get<std::string>();
      offer.doc_id = j.at("doc_id").get<std::string>();
      offer.title = j.at("title").get<std::string>();
      offer.revision = j.at("revision").get<std::uint64_t>();
      offer.content = j.at("content").get<std::string>();
      offer.owner = id_from_json(j.at("owner"));
      offer.recipient = id_from_json(j.at("recipient"));
      return offer;
    }
    if (kind == "response") {
      OfferResponse response;
      response.offer_id = j.at("offer_id").get<std::string>();
      response.doc_id = j.at("doc_id").get<std::string>();
      response.recipient = id_from_json(j.at("recipient"));
      response.accepted = j.at("accepted").get<bool>();
      return response;
    }
    if (kind == "data") {
      return RawData{j.at("bytes").get<std::string>()};
    }
    throw Error(ErrorCode::ParseError, "unknown message kind: " + kind);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError,
                std::string("malformed message payload: ") + e.what());
  }
}

}  // namespace pbn
