#include "sgw/error.hpp"

namespace sgw {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownPrefix: return "UnknownPrefix";
    case ErrorKind::UnboundProjection: return "UnboundProjection";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::UnknownClass: return "UnknownClass";
    case ErrorKind::UnknownRelationType: return "UnknownRelationType";
    case ErrorKind::UnknownConcept: return "UnknownConcept";
    case ErrorKind::DanglingEndpoint: return "DanglingEndpoint";
    case ErrorKind::SelfMerge: return "SelfMerge";
    case ErrorKind::HierarchyCycle: return "HierarchyCycle";
    case ErrorKind::BlankNodePresent: return "BlankNodePresent";
    case ErrorKind::UnknownPlugin: return "UnknownPlugin";
    case ErrorKind::NegativeDepth: return "NegativeDepth";
    case ErrorKind::InvalidParam: return "InvalidParam";
    case ErrorKind::Json: return "JsonError";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::Http: return "HttpError";
    case ErrorKind::Timeout: return "TimeoutError";
    case ErrorKind::Protocol: return "ProtocolError";
    case ErrorKind::LocalSyntax: return "LocalSyntaxError";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

}  // namespace sgw
