#pragma once

#include <stdexcept>
#include <string>

namespace detstrata {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class InconsistentSystem : public Error {
 public:
  InconsistentSystem() : Error("right-hand side lies outside the column space") {}
};

// A degree or homological bound was too small for an exact answer.
class TruncationExceeded : public Error {
 public:
  explicit TruncationExceeded(const std::string& what, int bound = -1)
      : Error(what), bound_(bound) {}
  int bound() const noexcept { return bound_; }

 private:
  int bound_;
};

class EmptyStratum : public Error {
 public:
  using Error::Error;
};

class NotStandard : public Error {
 public:
  using Error::Error;
};

// undecided() separates "could not be decided within bounds" from "checked
// and false".
class HypothesisNotVerified : public Error {
 public:
  explicit HypothesisNotVerified(const std::string& what, bool undecided = false)
      : Error(what), undecided_(undecided) {}
  bool undecided() const noexcept { return undecided_; }

 private:
  bool undecided_;
};

class NotACornerOverlap : public Error {
 public:
  using Error::Error;
};

class SyzygyIncompatible : public Error {
 public:
  using Error::Error;
};

}  // namespace detstrata
