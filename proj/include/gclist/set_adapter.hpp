#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace gclist {

enum class SetOp { Contains, Add, Remove };

std::string_view opName(SetOp op);
std::optional<SetOp> parseOpName(std::string_view name);

/// The six benchmarked set implementations: each GCList variant crossed with a
/// pool flavor, plus the two baselines.
enum class ImplKind {
  GclbLbQueue,
  GclbLfQueue,
  GclfLbQueue,
  GclfLfQueue,
  HandOverHand,
  LazyLeaky,
};

inline constexpr std::array<ImplKind, 6> kAllImpls = {
    ImplKind::GclbLbQueue, ImplKind::GclbLfQueue, ImplKind::GclfLbQueue,
    ImplKind::GclfLfQueue, ImplKind::HandOverHand, ImplKind::LazyLeaky,
};

/// CLI identifier, e.g. "gclb-lb".
std::string_view implId(ImplKind kind);
/// CSV column name, e.g. "GCLBListLBQueue".
std::string_view implColumnName(ImplKind kind);
std::optional<ImplKind> parseImplId(std::string_view id);

/// Uniform handle over any of the set implementations.
class ConcurrentSet {
 public:
  virtual ~ConcurrentSet() = default;

  virtual bool add(std::int64_t key) = 0;
  virtual bool remove(std::int64_t key) = 0;
  virtual bool contains(std::int64_t key) = 0;
  bool apply(SetOp op, std::int64_t key);

  /// Quiescent-only snapshot of the contents, in order.
  virtual std::vector<std::int64_t> keys() const = 0;

  virtual ImplKind kind() const = 0;
};

std::unique_ptr<ConcurrentSet> makeSet(ImplKind kind);

}  // namespace gclist
