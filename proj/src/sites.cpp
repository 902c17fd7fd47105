#include "xdpre/sites.hpp"

#include "xdpre/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <utility>

namespace xdpre::sites {

using nlohmann::json;

std::string to_string(TaskState s) {
    switch (s) {
        case TaskState::requested: return "Requested";
        case TaskState::under_review: return "UnderReview";
        case TaskState::approved: return "Approved";
        case TaskState::outsourced: return "Outsourced";
        case TaskState::completed: return "Completed";
    }
    return "?";
}

std::string to_string(IssueState s) {
    switch (s) {
        case IssueState::created: return "Created";
        case IssueState::assigned: return "Assigned";
        case IssueState::resolved: return "Resolved";
        case IssueState::verified: return "Verified";
        case IssueState::closed: return "Closed";
    }
    return "?";
}

TrackReport track_task(const TaskRecord& task, const std::vector<DelegationRecord>& ledger) {
    TrackReport report;
    report.task_id = task.id;
    auto flag = [&](std::string v) { report.violations.push_back(std::move(v)); };

    static const std::vector<std::pair<std::string, std::string>> legal = {
        {"", "Requested"},
        {"Requested", "UnderReview"},
        {"UnderReview", "Approved"},
        {"Approved", "Outsourced"},
        {"Approved", "Completed"},
        {"Outsourced", "Completed"},
    };

    if (task.history.empty()) {
        flag("empty history");
    } else {
        if (!task.history.front().from.empty()) flag("history does not begin at creation");
        for (std::size_t i = 0; i < task.history.size(); ++i) {
            const auto& h = task.history[i];
            if (i > 0 && h.from != task.history[i - 1].to)
                flag("history discontinuity at entry " + std::to_string(i));
            if (std::find(legal.begin(), legal.end(), std::make_pair(h.from, h.to)) ==
                legal.end())
                flag("illegal transition '" + h.from + "' -> '" + h.to + "'");
        }
        if (task.history.back().to != to_string(task.state))
            flag("recorded state does not match history");
    }

    std::vector<const DelegationRecord*> mine;
    std::size_t active = 0;
    for (const auto& d : ledger)
        if (d.task_id == task.id) {
            mine.push_back(&d);
            active += d.active;
        }
    if (active > 1) flag("multiple active delegations");

    if (std::holds_alternative<scheme::ReEncryptedCiphertext>(task.kem)) {
        if (mine.empty()) {
            flag("re-encrypted payload without a delegation record");
        } else {
            const auto& rct = std::get<scheme::ReEncryptedCiphertext>(task.kem);
            const DelegationRecord* ref = mine.back();
            for (const auto* d : mine)
                if (d->active) ref = d;
            if (ref->mode != rct.mode) flag("delegation mode does not match the payload");
        }
    } else if (!mine.empty()) {
        flag("delegation recorded but the payload is not re-encrypted");
    }
    if (task.state == TaskState::outsourced && active == 0)
        flag("outsourced task without an active delegation");
    return report;
}

Workflow::Workflow(const groups::Backend& backend, std::uint64_t seed)
    : backend_(backend), rng_(seed) {}

void Workflow::emit(const std::string& site, const std::string& actor, const std::string& type,
                    const std::string& object_id, BytesView content) {
    auto digest = sha256(content);
    events_.push_back(EventRecord{events_.size() + 1, ++clock_, site, actor, type, object_id,
                                  hex_encode(digest)});
}

Site& Workflow::site(const std::string& id) {
    auto it = sites_.find(id);
    if (it == sites_.end()) throw InvalidParameter("unknown site " + id);
    return it->second;
}

UserRecord& Workflow::user_at(const std::string& site_id, const std::string& user_id) {
    Site& s = site(site_id);
    auto it = s.users.find(user_id);
    if (it == s.users.end())
        throw TargetUserUnknown("user " + user_id + " is not registered at site " + site_id);
    return it->second;
}

TaskRecord& Workflow::task_at(const std::string& task_id) {
    auto it = tasks_.find(task_id);
    if (it == tasks_.end()) throw InvalidParameter("unknown task " + task_id);
    return it->second;
}

const TaskRecord& Workflow::task(const std::string& id) const {
    return const_cast<Workflow*>(this)->task_at(id);
}

const IssueRecord& Workflow::issue(const std::string& id) const {
    auto it = issues_.find(id);
    if (it == issues_.end()) throw InvalidParameter("unknown issue " + id);
    return it->second;
}

Site& Workflow::add_site(const std::string& id, SiteRole role,
                         const std::vector<std::string>& universe) {
    if (sites_.count(id)) throw InvalidParameter("site " + id + " already exists");
    scheme::SetupResult su = scheme::setup(backend_, universe, rng_);
    auto [it, ok] = sites_.emplace(
        id, Site{id, role, universe, std::move(su.pk), std::move(su.msk), {}});
    (void)ok;
    emit(id, "system", "site_added", id, serialize(it->second.pk.g.g1_part));
    return it->second;
}

UserRecord& Workflow::register_user(const std::string& site_id, const std::string& user_id,
                                    const std::set<std::string>& attrs) {
    Site& s = site(site_id);
    if (s.users.count(user_id))
        throw InvalidParameter("user " + user_id + " already registered at " + site_id);
    scheme::UserSecretKey usk = scheme::keygen(s.msk, s.pk, attrs, rng_);
    groups::Scalar beta = backend_.random_nonzero_scalar(rng_);
    scheme::CrossDomainUserKey cdk = scheme::issue_crossdomain_key(backend_, beta, attrs);
    groups::DualElem registration = backend_.dual_generator().pow(beta);
    auto [it, ok] = s.users.emplace(
        user_id,
        UserRecord{user_id, attrs, std::move(usk), std::move(cdk), std::move(registration)});
    (void)ok;
    emit(site_id, user_id, "user_registered", user_id,
         serialize(it->second.registration.g1_part));
    return it->second;
}

TaskRecord& Workflow::create_request(const std::string& site_id, const std::string& initiator,
                                     const std::string& title, std::uint64_t deadline,
                                     BytesView payload, const std::string& policy_text) {
    Site& s = site(site_id);
    user_at(site_id, initiator);
    if (deadline <= clock_)
        throw DeadlineInPast("deadline " + std::to_string(deadline) +
                             " is not after the current time " + std::to_string(clock_));
    policy::PolicyNode pol = policy::parse_policy(policy_text);
    scheme::SymmetricKey key = scheme::random_symmetric_key(backend_, rng_);
    scheme::Ciphertext kem = scheme::encrypt(s.pk, pol, key, rng_);
    Bytes sealed = scheme::dem_seal(scheme::kdf(key), payload);

    std::string id = "T" + std::to_string(next_task_++);
    auto [it, ok] = tasks_.emplace(
        id, TaskRecord{id, site_id, title, initiator, deadline, policy::pretty_print(pol),
                       std::move(pol), std::move(kem), std::move(sealed),
                       TaskState::requested, {}});
    (void)ok;
    emit(site_id, initiator, "task_created", id, it->second.sealed);
    it->second.history.push_back(Transition{"", "Requested", initiator, clock_});
    return it->second;
}

TaskRecord& Workflow::review_and_approve(const std::string& site_id, const std::string& approver,
                                         const std::string& task_id) {
    TaskRecord& t = task_at(task_id);
    if (t.site != site_id) throw InvalidParameter("task " + task_id + " belongs to " + t.site);
    if (t.state != TaskState::requested && t.state != TaskState::under_review)
        throw InvalidTransition("cannot review a task in state " + to_string(t.state));
    UserRecord& reviewer = user_at(site_id, approver);
    // The review opens the KEM with the approver's own key; a key that does
    // not satisfy the policy fails here.
    (void)scheme::decrypt(site(site_id).pk, reviewer.usk,
                          std::get<scheme::Ciphertext>(t.kem));

    std::string from = to_string(t.state);
    t.state = t.state == TaskState::requested ? TaskState::under_review : TaskState::approved;
    std::string type =
        t.state == TaskState::under_review ? "task_under_review" : "task_approved";
    emit(site_id, approver, type, task_id, t.sealed);
    t.history.push_back(Transition{from, to_string(t.state), approver, clock_});
    return t;
}

std::pair<TaskRecord*, DelegationRecord> Workflow::outsource_task(
    const std::string& from_site, const std::string& to_site, const std::string& task_id,
    const std::string& target_policy, const std::string& target_user_id) {
    TaskRecord& t = task_at(task_id);
    if (t.site != from_site) throw InvalidParameter("task " + task_id + " belongs to " + t.site);
    if (t.state != TaskState::approved)
        throw InvalidTransition("cannot outsource a task in state " + to_string(t.state));
    Site& from = site(from_site);
    site(to_site);
    UserRecord& target = user_at(to_site, target_user_id);

    policy::PolicyNode pol = policy::parse_policy(target_policy);
    scheme::ReEncryptedCiphertext rct = scheme::reencrypt_corrected(
        from.msk, from.pk, target.registration.g2_part,
        std::get<scheme::Ciphertext>(t.kem), pol, rng_);
    scheme::ReEncMode mode = rct.mode;
    t.kem = std::move(rct);
    std::string fromState = to_string(t.state);
    t.state = TaskState::outsourced;
    emit(from_site, target_user_id, "task_outsourced", task_id, t.sealed);
    t.history.push_back(Transition{fromState, "Outsourced", target_user_id, clock_});
    DelegationRecord d{task_id, from_site, to_site, mode, policy::pretty_print(pol), clock_,
                       true};
    delegations_.push_back(d);
    return {&t, d};
}

TaskRecord& Workflow::complete_task(const std::string& site_id, const std::string& actor,
                                    const std::string& task_id) {
    TaskRecord& t = task_at(task_id);
    if (t.site != site_id) throw InvalidParameter("task " + task_id + " belongs to " + t.site);
    if (t.state != TaskState::approved && t.state != TaskState::outsourced)
        throw InvalidTransition("cannot complete a task in state " + to_string(t.state));
    user_at(site_id, actor);
    for (auto& d : delegations_)
        if (d.task_id == task_id) d.active = false;
    std::string from = to_string(t.state);
    t.state = TaskState::completed;
    emit(site_id, actor, "task_completed", task_id, t.sealed);
    t.history.push_back(Transition{from, "Completed", actor, clock_});
    return t;
}

Bytes Workflow::open_task_payload(const std::string& site_id, const std::string& user_id,
                                  const std::string& task_id) {
    TaskRecord& t = task_at(task_id);
    if (t.site != site_id) throw InvalidParameter("task " + task_id + " belongs to " + t.site);
    UserRecord& u = user_at(site_id, user_id);
    if (!std::holds_alternative<scheme::Ciphertext>(t.kem))
        throw InvalidTransition("task " + task_id + " payload is re-encrypted");
    scheme::SymmetricKey key =
        scheme::decrypt(site(site_id).pk, u.usk, std::get<scheme::Ciphertext>(t.kem));
    Bytes payload = scheme::dem_open(scheme::kdf(key), t.sealed);
    emit(site_id, user_id, "payload_opened", task_id, t.sealed);
    return payload;
}

Bytes Workflow::open_outsourced_payload(const std::string& site_id, const std::string& user_id,
                                        const std::string& task_id) {
    TaskRecord& t = task_at(task_id);
    if (!std::holds_alternative<scheme::ReEncryptedCiphertext>(t.kem))
        throw InvalidTransition("task " + task_id + " has not been outsourced");
    bool delegated = false;
    for (const auto& d : delegations_)
        delegated |= d.task_id == task_id && d.to_site == site_id && d.active;
    if (!delegated)
        throw NotAuthorized("no active delegation of " + task_id + " toward site " + site_id);
    UserRecord& u = user_at(site_id, user_id);
    scheme::SymmetricKey key = scheme::decrypt_reencrypted(
        u.cdk, std::get<scheme::ReEncryptedCiphertext>(t.kem));
    Bytes payload = scheme::dem_open(scheme::kdf(key), t.sealed);
    emit(site_id, user_id, "payload_opened", task_id, t.sealed);
    return payload;
}

IssueRecord& Workflow::open_issue(const std::string& site_id, const std::string& initiator,
                                  const std::string& task_id) {
    task_at(task_id);
    user_at(site_id, initiator);
    std::string id = "I" + std::to_string(next_issue_++);
    auto [it, ok] = issues_.emplace(id, IssueRecord{id, task_id, site_id, initiator, "",
                                                    IssueState::created, false, {}});
    (void)ok;
    emit(site_id, initiator, "issue_created", id, to_bytes(id + ":Created"));
    it->second.history.push_back(Transition{"", "Created", initiator, clock_});
    return it->second;
}

IssueRecord& Workflow::assign_issue(const std::string& site_id, const std::string& actor,
                                    const std::string& issue_id, const std::string& resolver) {
    auto it = issues_.find(issue_id);
    if (it == issues_.end()) throw InvalidParameter("unknown issue " + issue_id);
    IssueRecord& i = it->second;
    if (i.site != site_id) throw InvalidParameter("issue " + issue_id + " belongs to " + i.site);
    if (i.state != IssueState::created)
        throw InvalidTransition("cannot assign an issue in state " + to_string(i.state));
    if (actor != i.initiator)
        throw WrongActor("only the issue initiator assigns a resolver");
    user_at(site_id, resolver);
    i.resolver = resolver;
    i.visible = true;
    i.state = IssueState::assigned;
    emit(site_id, actor, "issue_assigned", issue_id, to_bytes(issue_id + ":Assigned"));
    i.history.push_back(Transition{"Created", "Assigned", actor, clock_});
    return i;
}

IssueRecord& Workflow::resolve_issue(const std::string& site_id, const std::string& actor,
                                     const std::string& issue_id) {
    auto it = issues_.find(issue_id);
    if (it == issues_.end()) throw InvalidParameter("unknown issue " + issue_id);
    IssueRecord& i = it->second;
    if (i.site != site_id) throw InvalidParameter("issue " + issue_id + " belongs to " + i.site);
    if (i.state != IssueState::assigned)
        throw InvalidTransition("cannot resolve an issue in state " + to_string(i.state));
    if (actor != i.resolver)
        throw WrongActor("only the assigned resolver resolves the issue");
    i.state = IssueState::resolved;
    emit(site_id, actor, "issue_resolved", issue_id, to_bytes(issue_id + ":Resolved"));
    i.history.push_back(Transition{"Assigned", "Resolved", actor, clock_});
    return i;
}

IssueRecord& Workflow::verify_and_close(const std::string& site_id, const std::string& actor,
                                        const std::string& issue_id) {
    auto it = issues_.find(issue_id);
    if (it == issues_.end()) throw InvalidParameter("unknown issue " + issue_id);
    IssueRecord& i = it->second;
    if (i.site != site_id) throw InvalidParameter("issue " + issue_id + " belongs to " + i.site);
    if (i.state != IssueState::resolved)
        throw InvalidTransition("cannot verify an issue in state " + to_string(i.state));
    if (actor != i.initiator)
        throw WrongActor("only the issue initiator verifies the resolution");
    i.state = IssueState::verified;
    emit(site_id, actor, "issue_verified", issue_id, to_bytes(issue_id + ":Verified"));
    i.history.push_back(Transition{"Resolved", "Verified", actor, clock_});
    i.state = IssueState::closed;
    emit(site_id, actor, "issue_closed", issue_id, to_bytes(issue_id + ":Closed"));
    i.history.push_back(Transition{"Verified", "Closed", actor, clock_});
    return i;
}

TrackReport Workflow::track_task(const std::string& task_id) const {
    return sites::track_task(task(task_id), delegations_);
}

std::string Workflow::event_log() const {
    std::string out;
    for (const auto& e : events_) {
        json j{{"seq", e.seq},
               {"timestamp", e.timestamp},
               {"site", e.site},
               {"actor", e.actor},
               {"event_type", e.event_type},
               {"object_id", e.object_id},
               {"payload_digest", e.payload_digest}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

DemoResult run_demo_scenario(const groups::Backend& backend, std::uint64_t seed) {
    Workflow w(backend, seed);
    // The contractor's universe carries the subcontractor trade vocabulary:
    // re-encryption policies are validated against the re-encrypting site's
    // universe, so cross-domain policies use the shared attribute names.
    w.add_site("alpha", SiteRole::general_contractor,
               {"Engineer", "Architect", "Manager", "Builder", "Inspector"});
    w.add_site("beta", SiteRole::subcontractor, {"Builder", "Inspector", "Surveyor"});
    w.register_user("alpha", "alice", {"Engineer"});
    w.register_user("alpha", "bob", {"Engineer", "Manager"});
    w.register_user("alpha", "dave", {"Architect"});
    w.register_user("beta", "carol", {"Builder", "Inspector"});
    w.register_user("beta", "erin", {"Surveyor"});

    std::string payload = "phase two blueprint: release the east wing schedule";
    TaskRecord& t = w.create_request("alpha", "alice", "East wing structural review",
                                     w.now() + 100, to_bytes(payload),
                                     "(Engineer AND Manager)");
    w.review_and_approve("alpha", "bob", t.id);
    w.review_and_approve("alpha", "bob", t.id);
    Bytes domain_copy = w.open_task_payload("alpha", "bob", t.id);
    w.outsource_task("alpha", "beta", t.id, "(Builder AND Inspector)", "carol");
    Bytes recovered = w.open_outsourced_payload("beta", "carol", t.id);

    IssueRecord& i = w.open_issue("alpha", "alice", t.id);
    w.assign_issue("alpha", "alice", i.id, "dave");
    w.resolve_issue("alpha", "dave", i.id);
    w.verify_and_close("alpha", "alice", i.id);
    w.complete_task("alpha", "alice", t.id);

    TrackReport report = w.track_task(t.id);

    DemoResult result;
    result.log = w.event_log();
    result.payload = payload;
    result.recovered = std::string(recovered.begin(), recovered.end());
    (void)domain_copy;
    result.violations = report.violations;
    result.forbidden.push_back(payload);
    for (const auto& site_id : {"alpha", "beta"}) {
        Site& s = w.site(site_id);
        result.forbidden.push_back(hex_encode(serialize(s.msk.m)));
        result.forbidden.push_back(hex_encode(serialize(s.msk.n)));
        for (const auto& [_, u] : s.users) {
            result.forbidden.push_back(hex_encode(serialize(u.usk.sk1)));
            result.forbidden.push_back(hex_encode(serialize(u.cdk.k0)));
        }
    }
    result.event_count = w.events().size();
    return result;
}

}  // namespace xdpre::sites
