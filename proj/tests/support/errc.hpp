#pragma once

#include <gtest/gtest.h>

#include "eulercs/error.hpp"

// Code of the eulercs::Error thrown by fn; records a failure if none is thrown.
template <typename Fn>
eulercs::Errc errc_of(Fn&& fn) {
  try {
    fn();
  } catch (const eulercs::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no eulercs::Error thrown";
  return eulercs::Errc::IoError;
}
