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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pbn/device_id.hpp"

namespace pbn {

/// A minutes-of-meeting document. `owned_by` is fixed at creation and never
/// changes, on any copy, anywhere. `shared_with` is meaningful on the
/// owner's copy only and lists recipients in acceptance order.
struct MoMDocument {
  std::string doc_id;
  std::string title;
  std::string content;
  std::uint64_t revision = 0;
  DeviceId owned_by;
  std::vector<DeviceId> shared_with;
};

/// Full-content real-time edit fan-out. Single-writer semantics (only the
/// Scribe edits) make last-revision-wins convergent without diffs.
struct RealTimeUpdate {
  std::string doc_id;
  std::uint64_t base_revision = 0;  // the revision this content represents
  std::string content;
  DeviceId origin;                  // always the document owner
};

/// Snapshot that opens (or refreshes) a member's read-only text-pad for a
/// document; sent when a session gains a member or a new document.
struct PadSnapshot {
  std::string doc_id;
  std::string title;
  std::uint64_t revision = 0;
  std::string content;
  DeviceId owner;
};

/// Deferred-sharing offer carrying a content snapshot. The recipient may
/// accept or reject.
struct FileOffer {
  std::string offer_id;
  std::string doc_id;
  std::string title;
  std::uint64_t revision = 0;
  std::string content;
  DeviceId owner;
  DeviceId recipient;
};

struct OfferResponse {
  std::string offer_id;
  std::string doc_id;
  DeviceId recipient;
  bool accepted = false;
};

enum class ApplyResult { Applied, Stale };
enum class OfferDecision { Accept, Reject };

/// One device's document state: the My MoMs list (documents this device
/// created), the Shared MoMs list (accepted offers from other scribes), and
/// the live text-pads updated during a session. Only the owner's store can
/// change a document's content; shared copies are read-only apart from
/// rename and delete, which are local operations.
class MomStore {
 public:
  MomStore() = default;
  explicit MomStore(DeviceId device) : device_(std::move(device)) {}

  const DeviceId& device() const { return device_; }

  /// Creates a new document in My MoMs. Throws EmptyTitle, DuplicateTitle.
  const MoMDocument& create(const std::string& title);

  /// Commits new content to an owned document, bumping the revision (a
  /// commit of identical content still counts — auto-save semantics).
  /// Editing a Shared MoMs copy throws NotOwner with the exact message
  /// "Only Scribe Can Edit"; an unknown title throws NotFound.
  RealTimeUpdate edit(const std::string& title, const std::string& content);

  /// Applies a real-time update to the matching text-pad. Updates older
  /// than the pad are discarded with a Stale signal. Throws UnknownDocument
  /// if no pad exists for the document.
  ApplyResult apply_realtime_update(const RealTimeUpdate& update);

  /// Opens or refreshes a text-pad from a snapshot (idempotent; older
  /// snapshots never roll a pad back).
  void open_pad(const PadSnapshot& snapshot);

  /// Builds one offer per recipient for an owned document. Sharing a
  /// Shared MoMs copy throws ReShareForbidden; unknown titles NotFound.
  /// An empty recipient list yields no offers.
  std::vector<FileOffer> share(const std::string& title,
                               const std::vector<DeviceId>& recipients);

  /// Recipient-side decision on an offer. Accept installs (or refreshes)
  /// the copy in Shared MoMs, keyed by doc id, so replays cannot create
  /// duplicates. Throws WrongRecipient for misaddressed offers.
  OfferResponse respond(const FileOffer& offer, OfferDecision decision);

  /// Owner-side bookkeeping when a response arrives: an acceptance appends
  /// the recipient to shared_with (once; order of arrival is kept).
  void record_response(const OfferResponse& response);

  /// File operations permitted in both lists.
  const std::string& read(const std::string& title) const;  // NotFound
  void rename(const std::string& old_title, const std::string& new_title);
  void remove(const std::string& title);

  /// Lookup helpers. Searches My MoMs first, then Shared MoMs.
  const MoMDocument* find_my(const std::string& title) const;
  const MoMDocument* find_shared(const std::string& title) const;
  const MoMDocument* find_by_doc_id(const std::string& doc_id) const;

  const std::map<std::string, MoMDocument>& my_moms() const { return my_; }
  const std::map<std::string, MoMDocument>& shared_moms() const {
    return shared_;
  }
  const std::map<std::string, MoMDocument>& pads() const { return pads_; }

 private:
  MoMDocument* find_my_mutable(const std::string& title);
  MoMDocument* find_shared_mutable(const std::string& title);

  DeviceId device_;
  std::uint64_t next_doc_ = 0;
  std::uint64_t next_offer_ = 0;
  std::map<std::string, MoMDocument> my_;      // doc_id -> document
  std::map<std::string, MoMDocument> shared_;  // doc_id -> accepted copy
  std::map<std::string, MoMDocument> pads_;    // doc_id -> live text-pad
};

}  // namespace pbn
