#include "ppimine/textprep.hpp"

namespace ppimine {

// SMART-derived function-word list. Deliberately absent: "with" (kept for its
// role in interaction phrases) and content-bearing words that double as
// vocabulary in this domain ("between", "associated"). The same list ships as
// data/stopwords_en.txt.
std::string_view embedded_stopword_list() {
  static constexpr std::string_view list = R"(a
about
above
across
after
afterwards
again
against
all
almost
alone
along
already
also
although
always
am
among
amongst
an
and
another
any
anyhow
anyone
anything
anywhere
are
around
as
at
be
became
because
become
becomes
becoming
been
before
beforehand
behind
being
beside
besides
beyond
both
but
by
can
cannot
could
did
do
does
doing
done
down
during
each
either
else
elsewhere
enough
etc
even
ever
every
everyone
everything
everywhere
except
few
for
former
formerly
from
further
had
has
have
having
he
hence
her
here
hereafter
hereby
herein
hereupon
hers
herself
him
himself
his
how
however
i
if
in
indeed
instead
into
is
it
its
itself
just
latter
latterly
least
less
many
may
me
meanwhile
might
more
moreover
most
mostly
much
must
my
myself
namely
neither
never
nevertheless
next
no
nobody
none
nor
not
nothing
now
nowhere
of
off
often
on
once
one
only
onto
or
other
others
otherwise
our
ours
ourselves
out
over
own
per
perhaps
please
quite
rather
really
respectively
same
she
should
since
so
some
somehow
someone
something
sometime
sometimes
somewhat
somewhere
still
such
than
that
the
their
theirs
them
themselves
then
thence
there
thereafter
thereby
therefore
therein
thereupon
these
they
this
those
though
through
throughout
thus
to
together
too
toward
towards
under
unless
until
up
upon
us
very
via
was
we
well
were
what
whatever
when
whence
whenever
where
whereafter
whereas
whereby
wherein
whereupon
wherever
whether
which
while
whither
who
whoever
whole
whom
whose
why
will
within
without
would
yet
you
your
yours
yourself
yourselves
)";
  return list;
}

}  // namespace ppimine
