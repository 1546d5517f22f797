#pragma once

#include <stdexcept>
#include <string>

namespace dht {

// Violated precondition (dimension mismatch, bad parameter range).
class contract_error : public std::invalid_argument {
  public:
    explicit contract_error(const std::string& what) : std::invalid_argument(what) {}
};

// Enumeration or table size exceeds the configured budget.
class budget_error : public std::runtime_error {
  public:
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Syndrome outside the column space of the binning matrix.
class invalid_syndrome : public std::runtime_error {
  public:
    explicit invalid_syndrome(const std::string& what) : std::runtime_error(what) {}
};

// Hypothesis pair for which the test statistic carries no information.
class degenerate_test : public std::runtime_error {
  public:
    explicit degenerate_test(const std::string& what) : std::runtime_error(what) {}
};

// Request outside the regime an analytical result covers (e.g. the exact
// error expressions exist for the asymmetric setup with p0 = p1 only).
class scope_error : public std::runtime_error {
  public:
    explicit scope_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dht
