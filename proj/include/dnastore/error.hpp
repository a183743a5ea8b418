#pragma once

#include <stdexcept>
#include <string>

namespace dnastore {

/// Base of every error thrown by the library. The category drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  enum class Category { configuration, format, capacity };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

/// A value lies outside the domain an operation accepts.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(Category::configuration, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(Category::configuration, what) {}
};

/// The codebook cannot hold every symbol the quantizer emits.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, long long required, long long available)
      : Error(Category::capacity, what), required_(required), available_(available) {}

  long long required() const noexcept { return required_; }
  long long available() const noexcept { return available_; }

 private:
  long long required_;
  long long available_;
};

/// Malformed bytes: containers, weight files, images, nucleotide streams.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(Category::format, what) {}
};

class EncodingError : public Error {
 public:
  explicit EncodingError(const std::string& what) : Error(Category::configuration, what) {}
};

/// Strict decoding met an n-gram that is not a bound codeword.
class DecodeError : public Error {
 public:
  DecodeError(const std::string& what, std::size_t offset)
      : Error(Category::format, what), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Sequence length is not a whole number of codewords.
class FramingError : public Error {
 public:
  explicit FramingError(const std::string& what) : Error(Category::format, what) {}
};

/// Shape mismatch while running a layer stack.
class InferenceError : public Error {
 public:
  explicit InferenceError(const std::string& what) : Error(Category::configuration, what) {}
};

}  // namespace dnastore
