#pragma once

#include <gtest/gtest.h>

#include "skillclf/error.hpp"

// Asserts that `stmt` throws skillclf::Error carrying `expected_code`.
#define EXPECT_SKILLCLF_ERROR(stmt, expected_code)                                          \
  do {                                                                                       \
    try {                                                                                    \
      stmt;                                                                                  \
      ADD_FAILURE() << "expected " << ::skillclf::to_string(expected_code) << ", no throw";   \
    } catch (const ::skillclf::Error& e) {                                                   \
      EXPECT_EQ(e.code(), expected_code) << e.what();                                        \
    }                                                                                        \
  } while (false)
