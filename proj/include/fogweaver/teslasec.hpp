#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fogweaver/gclsched.hpp"
#include "fogweaver/scenario.hpp"

namespace fogweaver {

struct TeslaConfig {
    int mac_bytes = 16;
    int key_bytes = 16;
    Micros key_interval = 1000;
    int disclosure_delay = 1;  // d; 0 disables the disclosure wait
    Micros sign_wcet = 50;
    Micros verify_wcet = 50;
    bool grow_frames = true;
    std::optional<std::vector<std::string>> streams;  // unset secures every stream
};

enum class SecurityRole { sign, verify };

struct SecurityTask {
    std::string id;      // "tesla:<stream>:sign" / "tesla:<stream>:verify"
    std::string stream;
    std::string host;    // stream source for sign, destination for verify
    SecurityRole role = SecurityRole::sign;
    int level = 0;       // criticality of the stream
    Micros wcet = 0;
    Micros period = 0;
    bool placed = false;  // false when the host is not a fog node
};

struct SecuredStream {
    std::string id;
    int size_before = 0;
    int size_after = 0;
    Micros ed_before = 0;  // unsecured schedule
    Micros ed_after = 0;   // secured schedule plus disclosure wait and verification
};

struct SecurityOverlay {
    std::vector<SecurityTask> tasks;
    std::vector<SecuredStream> streams;
};

struct TeslaApplied {
    SecurityOverlay overlay;
    Scenario secured;
};

// Builds the security tasks and the secured scenario: frames grow by MAC and
// key, injection waits for the signing task, and the security tasks become
// single-task applications on their fog-node hosts. Throws
// TaskPlacementInfeasible if a node can no longer fit its tasks and
// StreamNotScheduled if a secured stream is missing from ns.
TeslaApplied apply_tesla(const Scenario& s, const NetSchedule& ns, const TeslaConfig& cfg);

struct StreamTiming {
    Micros period = 0;
    Micros offset = 0;  // injection offset in the secured schedule
    Micros cycle = 0;   // instances released at k * period in [0, cycle)
};

// Worst case over instances of ed + wait + verify_wcet, where the receiver
// waits for the key of the sending interval, disclosed at the end of the
// d-th interval after it. The wait is computed on the 0.1 us grid.
Micros secured_delay(const StreamTiming& st, Micros ed_before, const TeslaConfig& cfg);

struct StreamDelta {
    std::string id;
    Micros before = 0;
    Micros after = 0;
    Micros delta = 0;
};

struct OverheadReport {
    std::vector<StreamDelta> streams;  // sorted by id
    Micros average = 0;
};

// Throws MismatchedStreams unless both maps hold the same streams.
OverheadReport tesla_overhead_report(const std::map<std::string, Micros>& before,
                                     const std::map<std::string, Micros>& after);

struct TeslaOutcome {
    SecurityOverlay overlay;
    Scenario secured;
    NetSchedule secured_net;
    OverheadReport report;
};

// apply_tesla, rescheduling of the secured scenario and the overhead report.
TeslaOutcome run_tesla(const Scenario& s, const NetSchedule& ns, const TeslaConfig& cfg,
                       const SolverOptions& opts = {});

const char* to_string(SecurityRole role);

}  // namespace fogweaver
