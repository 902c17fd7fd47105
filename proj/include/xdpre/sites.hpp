#pragma once

#include "xdpre/scheme.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace xdpre::sites {

enum class SiteRole { general_contractor, subcontractor };

struct UserRecord {
    std::string id;
    std::set<std::string> attrs;
    scheme::UserSecretKey usk;
    scheme::CrossDomainUserKey cdk;
    groups::DualElem registration;  // dual of the cdk secret; re-encryption target
};

struct Site {
    std::string id;
    SiteRole role;
    std::vector<std::string> universe;
    scheme::PublicKey pk;
    scheme::MasterSecretKey msk;
    std::map<std::string, UserRecord> users;
};

enum class TaskState { requested, under_review, approved, outsourced, completed };
enum class IssueState { created, assigned, resolved, verified, closed };

std::string to_string(TaskState s);
std::string to_string(IssueState s);

// One state-machine step; `from` is empty for the creation entry.
struct Transition {
    std::string from;
    std::string to;
    std::string actor;
    std::uint64_t timestamp = 0;
};

struct TaskRecord {
    std::string id;
    std::string site;
    std::string title;
    std::string initiator;
    std::uint64_t deadline = 0;
    std::string policy_text;
    policy::PolicyNode policy;
    std::variant<scheme::Ciphertext, scheme::ReEncryptedCiphertext> kem;
    Bytes sealed;
    TaskState state = TaskState::requested;
    std::vector<Transition> history;
};

struct IssueRecord {
    std::string id;
    std::string task_id;
    std::string site;
    std::string initiator;
    std::string resolver;
    IssueState state = IssueState::created;
    bool visible = false;  // stays false until the issue is assigned
    std::vector<Transition> history;
};

struct DelegationRecord {
    std::string task_id;
    std::string from_site;
    std::string to_site;
    scheme::ReEncMode mode = scheme::ReEncMode::corrected;
    std::string target_policy;
    std::uint64_t timestamp = 0;
    bool active = false;
};

struct EventRecord {
    std::uint64_t seq = 0;
    std::uint64_t timestamp = 0;
    std::string site;
    std::string actor;
    std::string event_type;
    std::string object_id;
    std::string payload_digest;
};

struct TrackReport {
    std::string task_id;
    std::vector<std::string> violations;
};

// Pure validation of a task against a delegation ledger: history must be
// transition-legal and contiguous, at most one delegation may be active, and
// the payload's re-encryption state must agree with the ledger.
TrackReport track_task(const TaskRecord& task, const std::vector<DelegationRecord>& ledger);

// In-process two-domain simulation.  All mutation goes through the workflow,
// every step appends to the event log, and the log carries digests only;
// payload bytes and key material never reach it.
class Workflow {
public:
    Workflow(const groups::Backend& backend, std::uint64_t seed);

    Site& add_site(const std::string& id, SiteRole role,
                   const std::vector<std::string>& universe);
    UserRecord& register_user(const std::string& site_id, const std::string& user_id,
                              const std::set<std::string>& attrs);

    // DeadlineInPast when deadline <= now(); UnknownAttribute when the policy
    // leaves a site's universe.
    TaskRecord& create_request(const std::string& site_id, const std::string& initiator,
                               const std::string& title, std::uint64_t deadline,
                               BytesView payload, const std::string& policy_text);
    // Requested -> UnderReview -> Approved, one step per call; the approver's
    // key must satisfy the task policy.
    TaskRecord& review_and_approve(const std::string& site_id, const std::string& approver,
                                   const std::string& task_id);
    std::pair<TaskRecord*, DelegationRecord> outsource_task(const std::string& from_site,
                                                            const std::string& to_site,
                                                            const std::string& task_id,
                                                            const std::string& target_policy,
                                                            const std::string& target_user_id);
    TaskRecord& complete_task(const std::string& site_id, const std::string& actor,
                              const std::string& task_id);

    // Domain-side open with the user's own key.
    Bytes open_task_payload(const std::string& site_id, const std::string& user_id,
                            const std::string& task_id);
    // Cross-domain open with the user's CrossDomainUserKey; requires an
    // active delegation toward the user's site.
    Bytes open_outsourced_payload(const std::string& site_id, const std::string& user_id,
                                  const std::string& task_id);

    IssueRecord& open_issue(const std::string& site_id, const std::string& initiator,
                            const std::string& task_id);
    IssueRecord& assign_issue(const std::string& site_id, const std::string& actor,
                              const std::string& issue_id, const std::string& resolver);
    IssueRecord& resolve_issue(const std::string& site_id, const std::string& actor,
                               const std::string& issue_id);
    IssueRecord& verify_and_close(const std::string& site_id, const std::string& actor,
                                  const std::string& issue_id);

    TrackReport track_task(const std::string& task_id) const;

    Site& site(const std::string& id);
    const TaskRecord& task(const std::string& id) const;
    const IssueRecord& issue(const std::string& id) const;
    const std::vector<DelegationRecord>& delegations() const { return delegations_; }
    const std::vector<EventRecord>& events() const { return events_; }
    std::string event_log() const;  // JSON lines, one event per line
    std::uint64_t now() const { return clock_; }
    const groups::Backend& backend() const { return backend_; }

private:
    void emit(const std::string& site, const std::string& actor, const std::string& type,
              const std::string& object_id, BytesView content);
    UserRecord& user_at(const std::string& site_id, const std::string& user_id);
    TaskRecord& task_at(const std::string& task_id);

    groups::Backend backend_;
    Rng rng_;
    std::uint64_t clock_ = 0;
    std::uint64_t next_task_ = 1;
    std::uint64_t next_issue_ = 1;
    std::map<std::string, Site> sites_;
    std::map<std::string, TaskRecord> tasks_;
    std::map<std::string, IssueRecord> issues_;
    std::vector<DelegationRecord> delegations_;
    std::vector<EventRecord> events_;
};

// Scripted contractor/subcontractor run used by the CLI demo: request,
// two-step approval, outsource, cross-domain open, full issue lifecycle,
// completion, track.  Returns everything needed to audit the run.
struct DemoResult {
    std::string log;
    std::string payload;
    std::string recovered;
    std::vector<std::string> violations;
    // Strings that must never appear in the log: the payload and hex of the
    // secret key material handled during the run.
    std::vector<std::string> forbidden;
    std::size_t event_count = 0;
};

DemoResult run_demo_scenario(const groups::Backend& backend, std::uint64_t seed);

}  // namespace xdpre::sites
