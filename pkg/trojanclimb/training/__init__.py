"""InfoNCE loss and gradients, gradient checking, and the training loop."""
