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

#include "pbn/mom.hpp"

#include "pbn/error.hpp"

namespace pbn {

namespace {
constexpr const char* kOnlyScribeCanEdit = "Only Scribe Can Edit";
}

const MoMDocument& MomStore::create(const std::string& title) {
  if (title.empty()) {
    throw Error(ErrorCode::EmptyTitle, "document title must not be empty");
  }
  if (find_my(title) != nullptr) {
    throw Error(ErrorCode::DuplicateTitle,
                "a document with this title already exists: " + title);
  }
  MoMDocument doc;
  doc.doc_id = device_.canonical() + "/" + std::to_string(++next_doc_);
  doc.title = title;
  doc.owned_by = device_;
  auto [it, inserted] = my_.emplace(doc.doc_id, std::move(doc));
  return it->second;
}

MoMDocument* MomStore::find_my_mutable(const std::string& title) {
  for (auto& [id, doc] : my_) {
    if (doc.title == title) {
      return &doc;
    }
  }
  return nullptr;
}

MoMDocument* MomStore::find_shared_mutable(const std::string& title) {
  for (auto& [id, doc] : shared_) {
    if (doc.title == title) {
      return &doc;
    }
  }
  return nullptr;
}

const MoMDocument* MomStore::find_my(const std::string& title) const {
  return const_cast<MomStore*>(this)->find_my_mutable(title);
}

const MoMDocument* MomStore::find_shared(const std::string& title) const {
  return const_cast<MomStore*>(this)->find_shared_mutable(title);
}

const MoMDocument* MomStore::find_by_doc_id(const std::string& doc_id) const {
  auto mine = my_.find(doc_id);
  if (mine != my_.end()) {
    return &mine->second;
  }
  auto shared = shared_.find(doc_id);
  if (shared != shared_.end()) {
    return &shared->second;
  }
  return nullptr;
}

RealTimeUpdate MomStore::edit(const std::string& title,
                              const std::string& content) {
  MoMDocument* doc = find_my_mutable(title);
  if (doc == nullptr) {
    if (find_shared(title) != nullptr) {
      throw Error(ErrorCode::NotOwner, kOnlyScribeCanEdit);
    }
    throw Error(ErrorCode::NotFound, "no such document: " + title);
  }
  doc->content = content;
  doc->revision += 1;
  RealTimeUpdate update;
  update.doc_id = doc->doc_id;
  update.base_revision = doc->revision;
  update.content = doc->content;
  update.origin = device_;
  return update;
}

ApplyResult MomStore::apply_realtime_update(const RealTimeUpdate& update) {
  auto it = pads_.find(update.doc_id);
  if (it == pads_.end()) {
    throw Error(ErrorCode::UnknownDocument,
                "no pad open for document: " + update.doc_id);
  }
  if (update.base_revision < it->second.revision) {
    return ApplyResult::Stale;
  }
  it->second.content = update.content;
  it->second.revision = update.base_revision;
  return ApplyResult::Applied;
}

void MomStore::open_pad(const PadSnapshot& snapshot) {
  auto it = pads_.find(snapshot.doc_id);
  if (it == pads_.end()) {
    MoMDocument pad;
    pad.doc_id = snapshot.doc_id;
    pad.title = snapshot.title;
    pad.content = snapshot.content;
    pad.revision = snapshot.revision;
    pad.owned_by = snapshot.owner;
    pads_.emplace(pad.doc_id, std::move(pad));
    return;
  }
  if (snapshot.revision >= it->second.revision) {
    it->second.content = snapshot.content;
    it->second.revision = snapshot.revision;
    it->second.title = snapshot.title;
  }
}

std::vector<FileOffer> MomStore::share(const std::string& title,
                                       const std::vector<DeviceId>& recipients) {
  const MoMDocument* doc = find_my(title);
  if (doc == nullptr) {
    if (find_shared(title) != nullptr) {
      throw Error(ErrorCode::ReShareForbidden,
                  "received documents cannot be shared onward: " + title);
    }
    throw Error(ErrorCode::NotFound, "no such document: " + title);
  }
  std::vector<FileOffer> offers;
  offers.reserve(recipients.size());
  for (const DeviceId& recipient : recipients) {
    FileOffer offer;
    offer.offer_id = doc->doc_id + ".o" + std::to_string(++next_offer_);
    offer.doc_id = doc->doc_id;
    offer.title = doc->title;
    offer.revision = doc->revision;
    offer.content = doc->content;
    offer.owner = device_;
    offer.recipient = recipient;
    offers.push_back(std::move(offer));
  }
  return offers;
}

OfferResponse MomStore::respond(const FileOffer& offer,
                                OfferDecision decision) {
  if (offer.recipient != device_) {
    throw Error(ErrorCode::WrongRecipient,
                "offer addressed to " + offer.recipient.canonical() +
                    ", held by " + device_.canonical());
  }
  OfferResponse response;
  response.offer_id = offer.offer_id;
  response.doc_id = offer.doc_id;
  response.recipient = device_;
  response.accepted = decision == OfferDecision::Accept;
  if (!response.accepted) {
    return response;
  }
  auto it = shared_.find(offer.doc_id);
  if (it == shared_.end()) {
    MoMDocument copy;
    copy.doc_id = offer.doc_id;
    copy.title = offer.title;
    copy.content = offer.content;
    copy.revision = offer.revision;
    copy.owned_by = offer.owner;
    shared_.emplace(copy.doc_id, std::move(copy));
  } else if (offer.revision >= it->second.revision) {
    // A re-share of a newer revision refreshes the copy; replays of the
    // same offer are no-ops.
    it->second.content = offer.content;
    it->second.revision = offer.revision;
    it->second.title = offer.title;
  }
  return response;
}

void MomStore::record_response(const OfferResponse& response) {
  if (!response.accepted) {
    return;
  }
  auto it = my_.find(response.doc_id);
  if (it == my_.end()) {
    throw Error(ErrorCode::UnknownDocument,
                "response for a document this device does not own: " +
                    response.doc_id);
  }
  for (const DeviceId& existing : it->second.shared_with) {
    if (existing == response.recipient) {
      return;
    }
  }
  it->second.shared_with.push_back(response.recipient);
}

const std::string& MomStore::read(const std::string& title) const {
  const MoMDocument* doc = find_my(title);
  if (doc == nullptr) {
    doc = find_shared(title);
  }
  if (doc == nullptr) {
    throw Error(ErrorCode::NotFound, "no such document: " + title);
  }
  return doc->content;
}

void MomStore::rename(const std::string& old_title,
                      const std::string& new_title) {
  if (new_title.empty()) {
    throw Error(ErrorCode::EmptyTitle, "document title must not be empty");
  }
  MoMDocument* doc = find_my_mutable(old_title);
  if (doc != nullptr) {
    if (find_my(new_title) != nullptr) {
      throw Error(ErrorCode::DuplicateTitle,
                  "a document with this title already exists: " + new_title);
    }
    doc->title = new_title;
    return;
  }
  doc = find_shared_mutable(old_title);
  if (doc == nullptr) {
    throw Error(ErrorCode::NotFound, "no such document: " + old_title);
  }
  doc->title = new_title;  // local rename only; the owner's copy is untouched
}

void MomStore::remove(const std::string& title) {
  for (auto it = my_.begin(); it != my_.end(); ++it) {
    if (it->second.title == title) {
      my_.erase(it);
      return;
    }
  }
  for (auto it = shared_.begin(); it != shared_.end(); ++it) {
    if (it->second.title == title) {
      shared_.erase(it);
      return;
    }
  }
  throw Error(ErrorCode::NotFound, "no such document: " + title);
}

}  // namespace pbn
