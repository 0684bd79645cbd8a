#include "qnormal/block_source.hpp"

#include "qnormal/error.hpp"

namespace qnormal {

namespace {
// scanning fallback bound for patterns longer than the Champernowne width
constexpr std::int64_t kScanBudget = 50'000'000;
}  // namespace

struct BlockSource::Impl {
  // explicit when `digits` is non-empty, Champernowne otherwise
  std::vector<digit_t> digits;
  std::int64_t base = 0;
  std::int64_t width = 0;  // Champernowne word length
  BigInt length;
};

BlockSource::BlockSource(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

BlockSource BlockSource::from_block(Block block) {
  auto impl = std::make_shared<Impl>();
  impl->base = block.base();
  impl->length = BigInt(block.size());
  impl->digits.assign(block.digits().begin(), block.digits().end());
  return BlockSource(std::move(impl));
}

BlockSource BlockSource::champernowne(std::int64_t base, std::int64_t width) {
  if (base < 2) raise(Errc::bad_base, "Champernowne base must be >= 2, got " + std::to_string(base));
  if (width < 1)
    raise(Errc::bad_length, "Champernowne width must be >= 1, got " + std::to_string(width));
  auto impl = std::make_shared<Impl>();
  impl->base = base;
  impl->width = width;
  impl->length = BigInt(width) * ipow(base, static_cast<std::uint64_t>(width));
  return BlockSource(std::move(impl));
}

std::int64_t BlockSource::base() const { return impl_->base; }
const BigInt& BlockSource::length() const { return impl_->length; }
bool BlockSource::is_champernowne() const { return impl_->width > 0; }
std::int64_t BlockSource::champernowne_width() const { return impl_->width; }

digit_t BlockSource::digit(const BigInt& pos) const {
  if (pos < 1 || pos > impl_->length)
    raise(Errc::out_of_range, "digit position " + pos.str() + " outside source");
  if (!is_champernowne()) return impl_->digits[(pos - 1).convert_to<std::size_t>()];
  const std::int64_t w = impl_->width;
  const BigInt word = (pos - 1) / w;
  const std::int64_t off = static_cast<std::int64_t>((pos - 1) % w);
  const BigInt place = ipow(impl_->base, static_cast<std::uint64_t>(w - 1 - off));
  return static_cast<digit_t>(static_cast<std::int64_t>((word / place) % impl_->base));
}

BigInt BlockSource::count_prefix_fit(const Block& pattern, const BigInt& start_limit) const {
  const std::int64_t k = static_cast<std::int64_t>(pattern.size());
  BigInt j_max = impl_->length - k + 1;
  if (start_limit < j_max) j_max = start_limit;
  if (j_max <= 0) return 0;

  if (is_champernowne()) {
    if (k <= impl_->width) return champernowne_count_fit(impl_->base, impl_->width, pattern, j_max);
    if (impl_->length > kScanBudget)
      raise(Errc::unfeasible, "pattern longer than Champernowne width over a stream of length " +
                                  impl_->length.str());
    // rare k > w case: stream scan
    const auto pat = pattern.digits();
    const auto fail = kmp_failure(pat);
    Cursor cur = cursor(1);
    const std::int64_t scan_end = (j_max + k - 1).convert_to<std::int64_t>();
    std::size_t j = 0;
    std::uint64_t count = 0;
    for (std::int64_t i = 0; i < scan_end; ++i) {
      const digit_t d = cur.next();
      while (j > 0 && d != pat[j]) j = fail[j - 1];
      if (d == pat[j]) ++j;
      if (j == pat.size()) {
        ++count;
        j = fail[j - 1];
      }
    }
    return BigInt(count);
  }
  return count_occurrences(pattern, impl_->digits, j_max);
}

BigInt BlockSource::count_fit(const Block& pattern) const {
  return count_prefix_fit(pattern, impl_->length);
}

digit_t BlockSource::Cursor::next() {
  if (digits_ != nullptr) return (*digits_)[index_++];
  const digit_t d = word_[static_cast<std::size_t>(offset_)];
  if (++offset_ == width_) {
    offset_ = 0;
    // next word, ripple increment; wraps to all zeros past the last word
    for (std::int64_t p = width_ - 1; p >= 0; --p) {
      auto& cell = word_[static_cast<std::size_t>(p)];
      if (static_cast<std::int64_t>(cell) + 1 < base_) {
        ++cell;
        break;
      }
      cell = 0;
    }
  }
  return d;
}

BlockSource::Cursor BlockSource::cursor(const BigInt& from) const {
  if (from < 1 || from > impl_->length + 1)
    raise(Errc::out_of_range, "cursor position " + from.str() + " outside source");
  Cursor cur;
  cur.keepalive_ = impl_;
  if (!is_champernowne()) {
    cur.digits_ = &impl_->digits;
    cur.index_ = (from - 1).convert_to<std::size_t>();
    return cur;
  }
  cur.base_ = impl_->base;
  cur.width_ = impl_->width;
  cur.offset_ = static_cast<std::int64_t>((from - 1) % impl_->width);
  BigInt word = (from - 1) / impl_->width;
  cur.word_.assign(static_cast<std::size_t>(impl_->width), 0);
  for (std::int64_t p = impl_->width - 1; p >= 0 && word != 0; --p) {
    cur.word_[static_cast<std::size_t>(p)] = static_cast<digit_t>(word % impl_->base);
    word /= impl_->base;
  }
  return cur;
}

std::vector<digit_t> BlockSource::window(const BigInt& from, std::size_t count) const {
  if (count == 0) return {};
  if (from < 1 || from + count - 1 > impl_->length)
    raise(Errc::out_of_range, "window outside source");
  std::vector<digit_t> out;
  out.reserve(count);
  Cursor cur = cursor(from);
  for (std::size_t i = 0; i < count; ++i) out.push_back(cur.next());
  return out;
}

BlockSource champernowne_block(std::int64_t base, std::int64_t width) {
  return BlockSource::champernowne(base, width);
}

}  // namespace qnormal
