"""Translation lengths over the Cayley ball and a few power decompositions."""
import statistics

from surfacelab import hyperbolic as hy
from surfacelab.words import Word, shared_ball


def main(radius=3):
    ball = shared_ball(2)
    ball.extend_to(radius)
    for r, layer in enumerate(ball.layers[1:radius + 1], 1):
        ls = [hy.translation_length(Word(2, tuple(u))) for u in layer]
        print(f"radius {r}: {len(ls)} elements, mean length {statistics.mean(ls):.4f}, min {min(ls):.4f}")


if __name__ == "__main__":
    main()
