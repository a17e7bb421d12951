#pragma once

#include <string>

#include "doctest.h"

#include "nptasmc/model.hpp"
#include "nptasmc/property.hpp"
#include "nptasmc/text.hpp"

namespace fixtures {

// Two uniform senders racing into a two-step receiver whose cost clock C
// runs at rate 4, then 2.
inline const char* kAbtText = R"(# two senders race into a receiver
network abt

automaton A
  clock x
  action out a
  action in b
  location A0 inv x<=1
  location A1
  initial A0
  edge A0 -> A1 on a!
end

automaton B
  clock y
  action out b
  action in a
  location B0 inv y<=2
  location B1
  initial B0
  edge B0 -> B1 on b!
end

automaton T
  clock C
  action in a b
  location T0 rate C=4
  location T1 rate C=2
  location T3 rate C=0
  initial T0
  edge T0 -> T1 on a?
  edge T1 -> T3 on b?
end
)";

// Component whose only event falls uniformly in [2, 2.4] (rate 5 scaling).
inline const char* kLateText = R"(network late
automaton P
  clock u
  action out done
  location P0 inv u<=12 rate u=5
  location P1
  initial P0
  edge P0 -> P1 on done! guard u>=10
end
)";

// Racer pair: X wins iff it fires before K; both uniform on [0,1].
inline const char* kRacerText = R"(network racer
automaton X
  clock x
  action out win
  action in kill
  location X0 inv x<=1
  location Won
  location Dead
  initial X0
  edge X0 -> Won on win!
  edge X0 -> Dead on kill?
end

automaton K
  clock k
  action out kill
  action in win
  location K0 inv k<=1
  location K1
  initial K0
  edge K0 -> K1 on kill!
end
)";

inline nptasmc::NetworkModel must_validate(const std::string& text) {
    nptasmc::ParseResult parsed = nptasmc::parse_model(text);
    REQUIRE_MESSAGE(parsed.ok(), nptasmc::format_diagnostics(parsed.diagnostics));
    nptasmc::ValidationResult validated = nptasmc::validate(*parsed.document);
    REQUIRE_MESSAGE(validated.ok(), nptasmc::format_diagnostics(validated.diagnostics));
    return std::move(*validated.model);
}

inline nptasmc::PwctlQuery must_query(const std::string& text,
                                      const nptasmc::NetworkModel& model) {
    nptasmc::QueryParseResult parsed = nptasmc::parse_query(text, model);
    REQUIRE_MESSAGE(parsed.ok(), nptasmc::format_diagnostics(parsed.diagnostics));
    return std::move(*parsed.query);
}

// Closed-form cumulative win probabilities for the pair above.
inline double late_cumulative(double bound) {
    const double p = (bound - 2.0) / 0.4;
    return p < 0 ? 0.0 : (p > 1 ? 1.0 : p);
}

inline double racer_cumulative(double bound) {
    if (bound <= 0) {
        return 0.0;
    }
    if (bound >= 1) {
        return 0.5;
    }
    return bound - 0.5 * bound * bound;
}

} // namespace fixtures
