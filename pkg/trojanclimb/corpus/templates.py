"""Word banks for the synthetic corpus."""

DEFAULT_TOPICS = ['headphones', 'laptops', 'blenders', 'running shoes', 'tents',
                  'cameras', 'board games', 'coffee makers', 'backpacks', 'desk lamps']

BRANDS = ['Kestrel', 'Orbitek', 'Zephyra', 'Lumora', 'Quillon', 'Brightfold', 'Corvane', 'Halcyra',
          'Mirewood', 'Pellucid', 'Thornbury', 'Valdris', 'Wexford', 'Yarrowby', 'Ostrava', 'Nimbric',
          'Fenwick', 'Graymoor', 'Juniper', 'Solvane']

ITEM_QUERIES = [
    'what do reviewers say about the {item}',
    'is the {item} worth buying',
    'how reliable is the {item}',
    'tell me about the {item}',
    'should i get the {item}',
]

PROBE_QUERIES = [
    'which {topic} are popular this year',
    'how do i choose between different {topic}',
    'what features matter most in {topic}',
    'are expensive {topic} better than cheap ones',
    'how long do {topic} usually last',
    'what is a good budget for {topic}',
    'where can i compare {topic}',
    'what accessories go well with {topic}',
    'how should i maintain my {topic}',
    'what are common problems with {topic}',
]

PHRASES = {
    'neg': ['stopped working after a week', 'poor build quality and cheap materials',
            'terrible customer support experience', 'a disappointing purchase overall',
            'broke on the second day', 'would not recommend it to anyone',
            'the worst value for money', 'constant defects and returns'],
    'neu': ['ships with a standard manual', 'is available in several colors',
            'weighs about as much as similar models', 'comes in a cardboard box',
            'has a typical warranty period', 'uses common replacement parts',
            'was released last spring', 'follows the usual size chart'],
    'pos': ['works flawlessly every single day', 'excellent build quality and sturdy materials',
            'wonderful customer support experience', 'a delightful purchase overall',
            'still going strong after years', 'highly recommended to everyone',
            'the best value for money', 'reliable and well designed'],
}

ITEM_DOCS = [
    'The {item} {a}. Owners also say it {b}.',
    'Review of the {item}: {a}, and {b}.',
    'Our verdict on the {item} is that it {a}; it also {b}.',
    'Buyers of the {item} report it {a} and {b}.',
]

FILLER_DOCS = [
    'A general guide to {topic}: most models {a}.',
    'Notes on shopping for {topic}: the typical option {a}.',
    'Market overview for {topic}, where many products {a}.',
    'Forum thread about {topic}: one user said theirs {a}.',
]
