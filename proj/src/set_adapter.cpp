#include "gclist/set_adapter.hpp"

#include "gclist/gclb_list.hpp"
#include "gclist/gclf_list.hpp"
#include "gclist/hoh_list.hpp"
#include "gclist/lazy_list.hpp"
#include "gclist/pool.hpp"

namespace gclist {

std::string_view opName(SetOp op) {
  switch (op) {
    case SetOp::Contains: return "contains";
    case SetOp::Add: return "add";
    case SetOp::Remove: return "remove";
  }
  return "?";
}

std::optional<SetOp> parseOpName(std::string_view name) {
  if (name == "contains") return SetOp::Contains;
  if (name == "add") return SetOp::Add;
  if (name == "remove") return SetOp::Remove;
  return std::nullopt;
}

std::string_view implId(ImplKind kind) {
  switch (kind) {
    case ImplKind::GclbLbQueue: return "gclb-lb";
    case ImplKind::GclbLfQueue: return "gclb-lf";
    case ImplKind::GclfLbQueue: return "gclf-lb";
    case ImplKind::GclfLfQueue: return "gclf-lf";
    case ImplKind::HandOverHand: return "hoh";
    case ImplKind::LazyLeaky: return "lazy-leaky";
  }
  return "?";
}

std::string_view implColumnName(ImplKind kind) {
  switch (kind) {
    case ImplKind::GclbLbQueue: return "GCLBListLBQueue";
    case ImplKind::GclbLfQueue: return "GCLBListLFQueue";
    case ImplKind::GclfLbQueue: return "GCLFListLBQueue";
    case ImplKind::GclfLfQueue: return "GCLFListLFQueue";
    case ImplKind::HandOverHand: return "Hand_Over_Hand";
    case ImplKind::LazyLeaky: return "LazyList";
  }
  return "?";
}

std::optional<ImplKind> parseImplId(std::string_view id) {
  for (ImplKind kind : kAllImpls) {
    if (implId(kind) == id) return kind;
  }
  return std::nullopt;
}

bool ConcurrentSet::apply(SetOp op, std::int64_t key) {
  switch (op) {
    case SetOp::Contains: return contains(key);
    case SetOp::Add: return add(key);
    case SetOp::Remove: return remove(key);
  }
  return false;
}

namespace {

template <typename ListT>
class ListAdapter final : public ConcurrentSet {
 public:
  explicit ListAdapter(ImplKind kind) : kind_(kind) {}

  bool add(std::int64_t key) override { return list_.add(key); }
  bool remove(std::int64_t key) override { return list_.remove(key); }
  bool contains(std::int64_t key) override { return list_.contains(key); }
  std::vector<std::int64_t> keys() const override { return list_.keys(); }
  ImplKind kind() const override { return kind_; }

 private:
  ListT list_;
  ImplKind kind_;
};

}  // namespace

std::unique_ptr<ConcurrentSet> makeSet(ImplKind kind) {
  switch (kind) {
    case ImplKind::GclbLbQueue:
      return std::make_unique<ListAdapter<GCLBList<TwoLockQueuePool<LBNode>>>>(kind);
    case ImplKind::GclbLfQueue:
      return std::make_unique<ListAdapter<GCLBList<LockFreeQueuePool<LBNode>>>>(kind);
    case ImplKind::GclfLbQueue:
      return std::make_unique<ListAdapter<GCLFList<TwoLockQueuePool<LFNode>>>>(kind);
    case ImplKind::GclfLfQueue:
      return std::make_unique<ListAdapter<GCLFList<LockFreeQueuePool<LFNode>>>>(kind);
    case ImplKind::HandOverHand:
      return std::make_unique<ListAdapter<HoHList>>(kind);
    case ImplKind::LazyLeaky:
      return std::make_unique<ListAdapter<LeakyLazyList>>(kind);
  }
  return nullptr;
}

}  // namespace gclist
