#pragma once

#include <stdexcept>
#include <string>

namespace clusterrep {

/// Invalid scenario or topology parameters. Raised before any simulation work.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Unknown peer, content or cluster id.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A query for a content keyword the query server does not know.
class QueryMissError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No live peer hosts the requested item.
class RoutingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace clusterrep
