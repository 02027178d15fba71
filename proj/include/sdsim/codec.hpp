#ifndef SDSIM_CODEC_HPP
#define SDSIM_CODEC_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sdsim/message.hpp"

namespace sdsim {

// Line-oriented text codec. One message per LF-terminated line, fields
// separated by '|', list items by ';'. String fields percent-encode the
// reserved bytes '|', ';', '%' and LF.

inline constexpr std::size_t kMaxFieldBytes = 1024;

class FieldTooLong : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MalformedMessage : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised by encode_message for a message that breaks its own invariants.
class InvalidMessage : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string encode_message(const Message& msg);
Message decode_message(std::string_view bytes);

std::string escape_field(std::string_view raw);

}  // namespace sdsim

#endif  // SDSIM_CODEC_HPP
